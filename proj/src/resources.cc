#include "cacer/resources.h"

#include <map>

#include "cacer/error.h"
#include "cacer_embedded_resources.inc"

namespace cacer {
namespace {

std::string_view Lookup(const std::map<std::string_view, std::string_view> &table,
                        std::string_view name) {
  auto it = table.find(name);
  if (it == table.end()) throw Error("UNKNOWN_RESOURCE", std::string(name));
  return it->second;
}

}  // namespace

std::string_view PromptTemplate(std::string_view name) {
  static const std::map<std::string_view, std::string_view> table(
      std::begin(embedded::kPrompts), std::end(embedded::kPrompts));
  return Lookup(table, name);
}

std::string_view DefaultLexicon(std::string_view name) {
  static const std::map<std::string_view, std::string_view> table(
      std::begin(embedded::kLexicons), std::end(embedded::kLexicons));
  return Lookup(table, name);
}

std::string FillTemplate(std::string_view tmpl,
                         const std::vector<std::pair<std::string, std::string>> &values) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      const std::size_t close = tmpl.find('}', i + 1);
      if (close != std::string_view::npos) {
        const std::string_view key = tmpl.substr(i + 1, close - i - 1);
        bool replaced = false;
        for (const auto &[k, v] : values) {
          if (k == key) {
            out += v;
            replaced = true;
            break;
          }
        }
        if (replaced) {
          i = close + 1;
          continue;
        }
      }
    }
    out += tmpl[i++];
  }
  return out;
}

}  // namespace cacer
