#pragma once

// Reference data for the two worked examples and the continual demo, plus
// the end-to-end fixture runs behind `icf demo`.

#include <string>
#include <vector>

#include "icf/matrix.hpp"

namespace icf::fixtures {

// 1/(z^2 - 6z - 3) [[-3 - 4z + 7z^2, -4i(z+1)z], [-(z+1)(z+3), i(-3 + 2z + z^2)]]
CMatrix example1_closed_form(Complex z);

// Published two-storey interpolant of the sin/cos/x^2/(1/(1+y)) example,
// coefficients rounded to five decimals in the source.
CMatrix example2_closed_form(double x, double y);
double example2_denominator(double x, double y);
// |Delta_2| / |grad Delta_2|: first-order distance to the zero set of the denominator.
double example2_pole_distance(double x, double y);

// Storey-1 coefficient matrices of the same example, (d/dx, d/dy).
CMatrix example2_l1_x();
CMatrix example2_l1_y();

struct Check {
  std::string label;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct FixtureReport {
  std::string name;
  std::vector<Check> checks;
  bool passed() const;
};

// name: example1 | example2 | continual | scalar-reduction
FixtureReport run_fixture(const std::string& name, const std::string& data_dir);

std::vector<std::string> fixture_names();

}  // namespace icf::fixtures
