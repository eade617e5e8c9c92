#pragma once

#include <string>
#include <vector>

#include "esdsim/csvio.hpp"
#include "esdsim/entanglement.hpp"

namespace esd::io {

// Self-contained SVG: measured concurrence for both damped pairs as markers
// with error bars, closed-form curves on top, axes and a legend. The output
// is a pure function of the inputs, so reruns are byte-identical.
std::string render_series_svg(const std::vector<SeriesRow>& rows,
                              const ent::InitialState& init,
                              const std::string& title);

}  // namespace esd::io
