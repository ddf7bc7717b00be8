#pragma once

#include <span>

namespace killing2d {

/// Bundled metric/field pairs used by the `examples` command and the
/// regression suite. Seven verify as Killing fields; "exp-x2-candidate" is a
/// known counterexample kept to exercise failure reporting, together with its
/// corrected companion field.
struct ExampleFixture {
  const char* name;
  const char* f1;
  const char* f2;
  const char* basis;
  const char* v1;
  const char* v2;
  bool killing;               // expected verification outcome
  const char* corrected_v1;   // nullptr unless a corrected companion exists
  const char* corrected_v2;
};

std::span<const ExampleFixture> bundled_examples();

}  // namespace killing2d
