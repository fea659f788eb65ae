#pragma once
// Seeded property checks shared by the `check` subcommand and the tests.

#include <string>
#include <vector>

namespace cdstab {

struct PropertyResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

std::vector<PropertyResult> run_property_suite(unsigned seed = 20240601u);

// max neighbour variation of the regularized detector applied to samples of
// the bump x(1-x)y(1-y)(1+xy), fitted log-log slope over the given meshes
double detector_variation_slope(const std::vector<int>& meshes, double delta_h = 1.0);

}  // namespace cdstab
