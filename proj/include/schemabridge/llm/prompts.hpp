#pragma once

#include "schemabridge/core/errors.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace schemabridge {

class MissingPrompt : public Error {
public:
    using Error::Error;
};

class RenderError : public Error {
public:
    using Error::Error;
};

/// The four task prompts, plain text with `{placeholder}` slots:
/// {source_schema} {target_schema} {mismatch_report} {mapping} {data}.
/// `{{` and `}}` produce literal braces.
struct PromptSet {
    std::string detect_mismatch;
    std::string generate_mapping;
    std::string generate_adapter;
    std::string transform_data;
};

/// Reads detect_mismatch.txt, generate_mapping.txt, generate_adapter.txt and
/// transform_data.txt. Throws MissingPrompt naming the first absent file.
[[nodiscard]] PromptSet load_prompts(const std::filesystem::path& directory);

using PromptVars = std::map<std::string, std::string, std::less<>>;

/// Throws RenderError on an unknown placeholder, a placeholder with no
/// value, or unbalanced braces.
[[nodiscard]] std::string render_prompt(std::string_view tmpl, const PromptVars& vars);

} // namespace schemabridge
