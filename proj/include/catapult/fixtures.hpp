#pragma once

#include <string>
#include <vector>

#include "catapult/dataset.hpp"

namespace catapult {
namespace fixtures {

// Embedded example configurations; the reproduce command compares the
// library's output against the published values for each of them.

Dataset two_point_even();       // {(1, .5), (1.3, .5)}, eta = 1
Dataset two_point_skewed();     // {(sqrt 3, .83), (1, .17)}, eta = 1
Dataset inflationary_fb_convergent();  // {(1, .6), (3, .4)}, eta = 0.3
Dataset deflationary_fb_catapult();    // {(5.92, .4), (3.74, .6)}, eta = 0.1
Dataset nonmonotone_exponent();        // {(1, .55), (.5, .34), (.9, .11)}, eta = 1
Dataset single_point_collapse();       // {(100, 1)}, eta = 0.01
Dataset unit_exponent();               // {(sqrt 3, 1/3), (sqrt .5, 2/3)}, eta = 1

struct ComparisonRow {
    std::string quantity;
    double reference;  // published value
    double computed;
    double tolerance;  // absolute
    bool pass;
};

// ids: ex121, ex122, ex123, ex124, ex125, spike_collapse
std::vector<ComparisonRow> reproduce(const std::string& id);
std::vector<std::string> reproduce_ids();

}  // namespace fixtures
}  // namespace catapult
