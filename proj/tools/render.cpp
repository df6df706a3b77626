#include "render.hpp"

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace dixie::cli {
namespace {

std::string scalar(const Json& v, const char* number_format) {
  if (v.is_null()) return "null";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  if (v.is_number_float()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, number_format, v.get<double>());
    return buf;
  }
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

bool is_table(const Json& v) {
  return v.is_array() && !v.empty() && v.front().is_object();
}

void table(const Json& rows, std::ostream& out, const std::string& indent) {
  std::vector<std::string> keys;
  for (const auto& [k, _] : rows.front().items()) keys.push_back(k);
  std::vector<std::vector<std::string>> cells;
  std::vector<std::size_t> width(keys.size());
  for (std::size_t c = 0; c < keys.size(); ++c) width[c] = keys[c].size();
  for (const auto& row : rows) {
    auto& line = cells.emplace_back();
    for (std::size_t c = 0; c < keys.size(); ++c) {
      line.push_back(row.contains(keys[c]) ? scalar(row[keys[c]], "%.10g") : "");
      width[c] = std::max(width[c], line.back().size());
    }
  }
  auto emit = [&](const std::vector<std::string>& line) {
    out << indent;
    for (std::size_t c = 0; c < line.size(); ++c) {
      out << (c ? "  " : "") << std::string(width[c] - line[c].size(), ' ') << line[c];
    }
    out << '\n';
  };
  emit(keys);
  for (const auto& line : cells) emit(line);
}

void records(const Json& obj, std::ostream& out, const std::string& indent) {
  for (const auto& [key, v] : obj.items()) {
    if (v.is_object()) {
      out << indent << key << ":\n";
      records(v, out, indent + "  ");
    } else if (is_table(v)) {
      out << indent << key << ":\n";
      table(v, out, indent + "  ");
    } else if (v.is_array()) {
      out << indent << key << ": [";
      for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << scalar(v[i], "%.10g");
      out << "]\n";
    } else {
      out << indent << key << ": " << scalar(v, "%.10g") << '\n';
    }
  }
}

}  // namespace

void render_text(const Json& envelope, std::ostream& out) { records(envelope, out, ""); }

bool render_csv(const Json& envelope, std::ostream& out) {
  const auto& results = envelope.at("results");
  if (!results.contains("rows") || !is_table(results["rows"])) return false;
  const auto& rows = results["rows"];
  std::vector<std::string> keys;
  for (const auto& [k, _] : rows.front().items()) keys.push_back(k);
  for (std::size_t c = 0; c < keys.size(); ++c) out << (c ? "," : "") << keys[c];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < keys.size(); ++c) {
      out << (c ? "," : "") << scalar(row.at(keys[c]), "%.17g");
    }
    out << '\n';
  }
  return true;
}

}  // namespace dixie::cli
