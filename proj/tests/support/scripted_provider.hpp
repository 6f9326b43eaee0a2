#pragma once

// Provider test double: scripted responses per template id, optional failure
// schedules for retry tests.

#include <functional>
#include <map>
#include <string>

#include "ipricing/provider.hpp"

namespace ipricing::testing {

class ScriptedProvider : public extract::Provider {
 public:
  std::string id() const override { return "scripted"; }

  void respond(const std::string& template_id, std::string text) {
    responses_[template_id] = std::move(text);
  }
  void fail_transiently(const std::string& template_id, int times) {
    transient_failures_[template_id] = times;
  }
  void fail_hard(const std::string& template_id) { hard_failures_.insert(template_id); }

  extract::ProviderResponse complete(const extract::ProviderRequest& request) override {
    ++calls_[request.template_id];
    last_prompt_ = request.prompt;
    if (hard_failures_.count(request.template_id)) {
      throw PipelineError(ErrorCode::ProviderError, "scripted permanent failure");
    }
    auto transient = transient_failures_.find(request.template_id);
    if (transient != transient_failures_.end() && transient->second > 0) {
      --transient->second;
      throw PipelineError(ErrorCode::ProviderError, "scripted transient failure",
                          /*transient=*/true);
    }
    auto it = responses_.find(request.template_id);
    if (it == responses_.end()) {
      throw PipelineError(ErrorCode::ProviderError,
                          "no scripted response for " + request.template_id);
    }
    extract::ProviderResponse response;
    response.text = it->second;
    response.finish_reason = "scripted";
    return response;
  }

  int calls(const std::string& template_id) const {
    auto it = calls_.find(template_id);
    return it == calls_.end() ? 0 : it->second;
  }
  const std::string& last_prompt() const { return last_prompt_; }

 private:
  std::map<std::string, std::string> responses_;
  std::map<std::string, int> transient_failures_;
  std::set<std::string> hard_failures_;
  std::map<std::string, int> calls_;
  std::string last_prompt_;
};

}  // namespace ipricing::testing
