#include "support/fixtures.hpp"

#include "support/oracles.hpp"
#include "tacdss/domain.hpp"
#include "tacdss/wang_mendel.hpp"

namespace tacdss::testing {

FuzzySystem sixteen_rule_model() {
  const auto sk = domain::make_skeleton({3, 3, 3, 3}, 5, InferenceConfig::trainable());
  const auto data = domain::generate_dataset(500, 0.02, 42);
  std::size_t n = 1;
  while (distinct_cells(sk, std::span(data).first(n)) < 16) ++n;
  return wang_mendel::learn_rules(sk, std::span(data).first(n));
}

}  // namespace tacdss::testing
