#pragma once

#include <iosfwd>

#include "trajpred/detection.hpp"
#include "trajpred/trajectory.hpp"

namespace trajpred {

/// Writes a standalone SVG with one panel per axis: the observed samples, the
/// fitted curve from the window start to t_target, and the predicted point
/// (the only element with class "prediction" in each panel). Output depends
/// only on the arguments.
void write_prediction_svg(std::ostream& out, const AxisSeries& xs, const AxisSeries& ys,
                          const AxisFits& fits, const PredictedEndpoint& prediction);

}  // namespace trajpred
