#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pstab/planar.hpp"

namespace pstab {

/// Closed worst-case orbit with both vector fields.
///
/// Everything inside <g id="data"> is in data coordinates (the group transform
/// flips y), so tests can read the geometry back exactly:
///   <polyline id="orbit" points="x,y ...">   every orbit sample, 17 digits
///   <circle class="switch" cx cy>            detected axis crossings
///   <line class="flow-a0">, <line class="flow-a1">, <line class="axis">
std::string figure1Svg(const PlanarPair& p, const WorstCaseResult& orbit, std::size_t flowGrid = 13);

/// ||y(t)|| against t with horizontal guides at the inf and sup norms
/// (<line id="inf-line" data-value> and <line id="sup-line" data-value>).
std::string normHistorySvg(const std::vector<std::pair<double, double>>& history, double infNorm, double supNorm);

}  // namespace pstab
