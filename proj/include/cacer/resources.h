#ifndef CACER_RESOURCES_H_
#define CACER_RESOURCES_H_

#include <string>
#include <string_view>
#include <vector>

namespace cacer {

// Version tag of the embedded prompt templates (resources/prompts/<version>).
inline constexpr std::string_view kPromptVersion = "v1";

// Embedded prompt template by file stem, e.g. "qa_drug_problem". Throws
// Error("UNKNOWN_RESOURCE") for unknown names.
std::string_view PromptTemplate(std::string_view name);

// Embedded default lexicon by file stem, e.g. "problems".
std::string_view DefaultLexicon(std::string_view name);

// Replaces every "{KEY}" with its value; unknown placeholders stay as-is.
std::string FillTemplate(std::string_view tmpl,
                         const std::vector<std::pair<std::string, std::string>> &values);

}  // namespace cacer

#endif  // CACER_RESOURCES_H_
