#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace ipricing::extract {

// The five extraction passes. The two add-on passes mirror how add-ons
// appear on real pages: inside feature tables, or in their own sections.
enum class TemplateId { Plans, Features, UsageLimits, AddonsInTable, AddonsFromHtml };

inline constexpr TemplateId kAllTemplates[] = {TemplateId::Plans, TemplateId::Features,
                                               TemplateId::UsageLimits, TemplateId::AddonsInTable,
                                               TemplateId::AddonsFromHtml};

std::string_view template_id_name(TemplateId id);  // "plans", "features", ...
std::string template_filename(TemplateId id);      // "<name>.prompt.txt"

// Prompt texts ship as versioned data files so they can be swapped without a
// rebuild. First significant line: `# prompt-version: <tag>`.
struct PromptTemplate {
  TemplateId id = TemplateId::Plans;
  std::string text;
  std::string version;
};

PromptTemplate load_template(const std::string& dir, TemplateId id);
std::map<TemplateId, PromptTemplate> load_templates(const std::string& dir);

// Substitutes {payload} and {prior_plans}; prior plans render as a JSON array.
std::string render_template(const PromptTemplate& tmpl, std::string_view payload,
                            const std::vector<std::string>& prior_plans);

}  // namespace ipricing::extract
