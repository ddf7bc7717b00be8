#include "killing2d/examples.hpp"

namespace killing2d {

namespace {

// Seven Killing pairs plus one deliberately defective candidate (with its
// corrected companion) so failure reporting stays regression-tested.
constexpr ExampleFixture kFixtures[] = {
    {"separable-exp", "exp(x1)", "exp(x2)", "coordinate", "exp(x1)", "exp(x2)", true, nullptr,
     nullptr},
    {"exp-x1-translation", "exp(x1)", "1", "coordinate", "exp(x1)", "1", true, nullptr, nullptr},
    {"translation-x2", "exp(-x1)", "exp(x1)", "coordinate", "0", "1", true, nullptr, nullptr},
    {"translation-x1", "exp(x2)", "1", "coordinate", "1", "0", true, nullptr, nullptr},
    {"scaled-rotation", "2", "3", "coordinate", "4*x2", "-9*x1", true, nullptr, nullptr},
    {"crossed-exp-x1", "exp(x1)", "1", "coordinate", "x2*exp(x1)", "exp(-x1)", true, nullptr,
     nullptr},
    {"exp-x2-candidate", "exp(x2)", "1", "coordinate", "-exp(x2)/2", "x1", false,
     "(x1^2-exp(2*x2))/2", "x1"},
    {"euclidean-rotation", "1", "1", "coordinate", "-x2", "x1", true, nullptr, nullptr},
};

}  // namespace

std::span<const ExampleFixture> bundled_examples() { return kFixtures; }

}  // namespace killing2d
