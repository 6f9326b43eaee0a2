#include "ipricing/prompts.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ipricing/diagnostics.hpp"

namespace ipricing::extract {

std::string_view template_id_name(TemplateId id) {
  switch (id) {
    case TemplateId::Plans: return "plans";
    case TemplateId::Features: return "features";
    case TemplateId::UsageLimits: return "usage_limits";
    case TemplateId::AddonsInTable: return "addons_in_table";
    case TemplateId::AddonsFromHtml: return "addons_from_html";
  }
  return "unknown";
}

std::string template_filename(TemplateId id) {
  return std::string(template_id_name(id)) + ".prompt.txt";
}

namespace {

bool needs_prior_plans(TemplateId id) {
  return id == TemplateId::Features || id == TemplateId::UsageLimits ||
         id == TemplateId::AddonsInTable;
}

}  // namespace

PromptTemplate load_template(const std::string& dir, TemplateId id) {
  const std::filesystem::path path = std::filesystem::path(dir) / template_filename(id);
  std::ifstream in(path);
  if (!in) {
    throw PipelineError(ErrorCode::FileNotFound, "prompt template not found: " + path.string());
  }
  PromptTemplate tmpl;
  tmpl.id = id;
  std::string line;
  std::ostringstream body;
  bool have_version = false;
  while (std::getline(in, line)) {
    if (!have_version) {
      if (line.empty()) continue;
      constexpr std::string_view kHeader = "# prompt-version:";
      if (line.rfind(kHeader, 0) != 0) {
        throw PipelineError(ErrorCode::ParseFailed,
                            path.string() + " must start with `# prompt-version: <tag>`");
      }
      std::string version = line.substr(kHeader.size());
      std::size_t start = version.find_first_not_of(' ');
      tmpl.version = start == std::string::npos ? "" : version.substr(start);
      if (tmpl.version.empty()) {
        throw PipelineError(ErrorCode::ParseFailed, path.string() + " has an empty version tag");
      }
      have_version = true;
      continue;
    }
    body << line << "\n";
  }
  if (!have_version) {
    throw PipelineError(ErrorCode::ParseFailed, path.string() + " is empty");
  }
  tmpl.text = body.str();
  if (tmpl.text.find("{payload}") == std::string::npos) {
    throw PipelineError(ErrorCode::ParseFailed,
                        path.string() + " is missing the {payload} placeholder");
  }
  if (needs_prior_plans(id) && tmpl.text.find("{prior_plans}") == std::string::npos) {
    throw PipelineError(ErrorCode::ParseFailed,
                        path.string() + " is missing the {prior_plans} placeholder");
  }
  return tmpl;
}

std::map<TemplateId, PromptTemplate> load_templates(const std::string& dir) {
  std::map<TemplateId, PromptTemplate> out;
  for (TemplateId id : kAllTemplates) out[id] = load_template(dir, id);
  return out;
}

std::string render_template(const PromptTemplate& tmpl, std::string_view payload,
                            const std::vector<std::string>& prior_plans) {
  std::string plans_json = "[";
  for (std::size_t i = 0; i < prior_plans.size(); ++i) {
    if (i) plans_json += ", ";
    plans_json += '"';
    for (char c : prior_plans[i]) {
      if (c == '"' || c == '\\') plans_json += '\\';
      plans_json += c;
    }
    plans_json += '"';
  }
  plans_json += "]";

  std::string out = tmpl.text;
  auto replace_all = [&out](std::string_view needle, std::string_view replacement) {
    std::size_t pos = 0;
    while ((pos = out.find(needle, pos)) != std::string::npos) {
      out.replace(pos, needle.size(), replacement);
      pos += replacement.size();
    }
  };
  replace_all("{prior_plans}", plans_json);
  replace_all("{payload}", payload);
  return out;
}

}  // namespace ipricing::extract
