#include "ipricing/model.hpp"

#include <algorithm>
#include <random>

#include "doctest.h"
#include "support/random_model.hpp"
#include "support/zoom_model.hpp"

using namespace ipricing;

namespace {

Pricing minimal_pricing() {
  Pricing p;
  p.saas_name = "Tiny";
  p.source_url = "https://tiny.test/pricing";
  p.extraction_date = Date{2024, 1, 1};
  Plan plan;
  plan.name = "Solo";
  plan.monthly_price = Price::free();
  plan.currency = "USD";
  p.plans.push_back(plan);
  return p;
}

}  // namespace

TEST_CASE("duplicate plan names are an error") {
  Pricing p = minimal_pricing();
  Plan dup;
  dup.name = "Pro";
  dup.monthly_price = Price::money(Decimal::from_units(10));
  dup.currency = "USD";
  p.plans.push_back(dup);
  dup.name = "pro ";  // same name after normalization
  p.plans.push_back(dup);
  auto ledger = validate_model(p);
  CHECK(ledger.has_errors());
  CHECK(ledger.count(codes::kDuplicatePlan) == 1);
}

TEST_CASE("hand-encoded reference pricing validates cleanly") {
  auto ledger = validate_model(testing::zoom_pricing());
  CHECK(ledger.empty());
}

TEST_CASE("add-on offered for unknown plan is a dangling reference") {
  Pricing p = minimal_pricing();
  AddOn a;
  a.name = "Phone Dialing";
  a.price = Price::money(Decimal::from_units(10));
  a.available_for.plans = {"Enterprise"};
  p.add_ons.push_back(a);
  auto ledger = validate_model(p);
  CHECK(ledger.has_errors());
  CHECK(ledger.count(codes::kDanglingReference) == 1);
}

TEST_CASE("plan/add-on name collision is forbidden by the model") {
  Pricing p = minimal_pricing();
  AddOn a;
  a.name = "solo";  // collides with plan "Solo" case-insensitively
  a.price = Price::money(Decimal::from_units(5));
  a.available_for.all_plans = true;
  p.add_ons.push_back(a);
  CHECK(validate_model(p).count(codes::kPlanAddOnCollision) == 1);
}

TEST_CASE("model with no plans and no standalone add-on cannot be subscribed") {
  Pricing p = minimal_pricing();
  p.plans.clear();
  CHECK(validate_model(p).count(codes::kNoSubscriptionPath) == 1);

  AddOn a;
  a.name = "Solo pack";
  a.price = Price::money(Decimal::from_units(5));
  a.standalone = true;
  p.add_ons.push_back(a);
  CHECK(validate_model(p).count(codes::kNoSubscriptionPath) == 0);
}

TEST_CASE("mismatched default value kind is flagged") {
  Pricing p = minimal_pricing();
  Feature f;
  f.name = "Seats";
  f.value_type = ValueType::Numeric;
  f.default_value = std::string("five");
  p.features.push_back(f);
  CHECK(validate_model(p).count(codes::kValueTypeMismatch) == 1);
}

TEST_CASE("finite limits need a unit and a non-negative amount") {
  Pricing p = minimal_pricing();
  UsageLimit u;
  u.name = "Storage";
  u.value = FiniteLimit{Decimal::from_units(-1), ""};
  p.usage_limits.push_back(u);
  auto ledger = validate_model(p);
  CHECK(ledger.count(codes::kNegativeLimit) == 1);
  CHECK(ledger.count(codes::kMissingUnit) == 1);
}

TEST_CASE("summarize returns exact cardinalities") {
  Pricing empty;
  empty.currency = "USD";
  CHECK(summarize(empty) == SummaryCounts{0, 0, 0, 0});
  CHECK(summarize(testing::zoom_pricing()) == SummaryCounts{3, 13, 3, 4});

  testing::ModelGen gen(7);
  for (int i = 0; i < 10; ++i) {
    Pricing p = gen.pricing();
    auto s = summarize(p);
    CHECK(s.plans == p.plans.size());
    CHECK(s.features == p.features.size());
    CHECK(s.usage_limits == p.usage_limits.size());
    CHECK(s.add_ons == p.add_ons.size());
  }
}

TEST_CASE("validation is idempotent and order-insensitive") {
  testing::ModelGen gen(21);
  Pricing p = gen.pricing();
  // Introduce violations so the ledger is non-trivial.
  if (!p.plans.empty()) p.plans.push_back(p.plans.front());
  AddOn dangling;
  dangling.name = "Rogue";
  dangling.price = Price::money(Decimal::from_units(1));
  dangling.available_for.plans = {"NoSuchPlan"};
  p.add_ons.push_back(dangling);

  auto ledger1 = validate_model(p);
  auto ledger2 = validate_model(p);
  CHECK(ledger1 == ledger2);

  Pricing shuffled = p;
  std::mt19937_64 rng(3);
  std::shuffle(shuffled.features.begin(), shuffled.features.end(), rng);
  std::shuffle(shuffled.plans.begin(), shuffled.plans.end(), rng);
  std::shuffle(shuffled.add_ons.begin(), shuffled.add_ons.end(), rng);
  std::shuffle(shuffled.usage_limits.begin(), shuffled.usage_limits.end(), rng);
  auto ledger3 = validate_model(shuffled);

  auto key = [](const Diagnostic& d) { return d.code + "|" + d.category + "|" + d.item; };
  std::vector<std::string> a, b;
  for (const auto& d : ledger1.entries()) a.push_back(key(d));
  for (const auto& d : ledger3.entries()) b.push_back(key(d));
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  CHECK(a == b);
}

TEST_CASE("constraints validate against the model") {
  Pricing p = testing::zoom_pricing();
  SubscriptionConstraints c;
  c.depends_on["Cloud Storage Extra"] = {"Cloud Storage Extra"};
  c.excludes["Large Meetings"] = {"Ghost"};
  auto ledger = validate_constraints(p, c);
  CHECK(ledger.count(codes::kSelfDependency) == 1);
  CHECK(ledger.count(codes::kDanglingReference) == 1);

  SubscriptionConstraints ok = SubscriptionConstraints::from_pricing(p);
  CHECK(ok.standalone_allowed.count("phone dialing") == 1);
  CHECK(validate_constraints(p, ok).empty());
}
