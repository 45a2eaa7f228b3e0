#include "schemabridge/llm/prompts.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

namespace schemabridge {

namespace {

constexpr std::array<std::string_view, 5> kPlaceholders = {"source_schema", "target_schema", "mismatch_report",
                                                           "mapping", "data"};

std::string read_prompt(const std::filesystem::path& dir, std::string_view file) {
    const auto path = dir / file;
    std::ifstream in(path);
    if (!in) throw MissingPrompt(std::string(file));
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

PromptSet load_prompts(const std::filesystem::path& directory) {
    PromptSet set;
    set.detect_mismatch = read_prompt(directory, "detect_mismatch.txt");
    set.generate_mapping = read_prompt(directory, "generate_mapping.txt");
    set.generate_adapter = read_prompt(directory, "generate_adapter.txt");
    set.transform_data = read_prompt(directory, "transform_data.txt");
    return set;
}

std::string render_prompt(std::string_view tmpl, const PromptVars& vars) {
    std::string out;
    out.reserve(tmpl.size());
    for (std::size_t i = 0; i < tmpl.size(); ++i) {
        const char c = tmpl[i];
        if (c == '{') {
            if (i + 1 < tmpl.size() && tmpl[i + 1] == '{') {
                out += '{';
                ++i;
                continue;
            }
            const auto close = tmpl.find('}', i);
            if (close == std::string_view::npos) throw RenderError("unterminated placeholder");
            const auto name = tmpl.substr(i + 1, close - i - 1);
            if (std::find(kPlaceholders.begin(), kPlaceholders.end(), name) == kPlaceholders.end()) {
                throw RenderError("unknown placeholder {" + std::string(name) + "}");
            }
            auto it = vars.find(name);
            if (it == vars.end()) throw RenderError("no value for placeholder {" + std::string(name) + "}");
            out += it->second;
            i = close;
        } else if (c == '}') {
            if (i + 1 < tmpl.size() && tmpl[i + 1] == '}') {
                out += '}';
                ++i;
                continue;
            }
            throw RenderError("stray '}' in prompt template");
        } else {
            out += c;
        }
    }
    return out;
}

} // namespace schemabridge
