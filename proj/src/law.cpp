#include <cmath>
#include <string>

#include "pstab/simcore.hpp"

namespace pstab {

SmallMatrix SwitchedFamily::combine(std::span<const double> weights) const {
    if (weights.size() != vertices.size()) {
        throw Error(ErrorKind::shape, "weight vector has " + std::to_string(weights.size()) +
                                          " entries for " + std::to_string(vertices.size()) + " vertices");
    }
    SmallMatrix m(dim(), dim());
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (weights[i] != 0.0) m += weights[i] * vertices[i];
    }
    return m;
}

void validate(const SwitchedFamily& family) {
    if (family.vertices.empty()) throw Error(ErrorKind::input, "switched family has no vertices");
    const std::size_t n = family.vertices.front().rows();
    for (const SmallMatrix& v : family.vertices) {
        if (!v.isSquare() || v.rows() != n) {
            throw Error(ErrorKind::input, "family vertices must be square and of equal size");
        }
    }
}

SwitchingLaw::SwitchingLaw(std::vector<Segment> segments, bool periodic)
    : segments_(std::move(segments)), periodic_(periodic), total_(0.0) {
    if (segments_.empty()) throw Error(ErrorKind::input, "switching law has no segments");
    const std::size_t width = segments_.front().weights.size();
    if (width == 0) throw Error(ErrorKind::input, "empty weight vector");
    for (const Segment& s : segments_) {
        if (!(s.duration > 0.0) || !std::isfinite(s.duration)) {
            throw Error(ErrorKind::input, "segment durations must be positive and finite");
        }
        if (s.weights.size() != width) throw Error(ErrorKind::input, "weight vectors differ in length");
        double sum = 0.0;
        for (double w : s.weights) {
            if (!(w >= 0.0)) throw Error(ErrorKind::input, "negative hull weight");
            sum += w;
        }
        if (std::abs(sum - 1.0) > 1e-12) throw Error(ErrorKind::input, "hull weights must sum to 1");
        total_ += s.duration;
    }
}

SwitchingLaw SwitchingLaw::fromBang(std::span<const std::pair<double, double>> durationAndU, bool periodic) {
    std::vector<Segment> segs;
    segs.reserve(durationAndU.size());
    for (const auto& [d, u] : durationAndU) {
        if (u < 0.0 || u > 1.0) throw Error(ErrorKind::input, "bang value outside [0, 1]");
        segs.push_back({d, {1.0 - u, u}});
    }
    return SwitchingLaw(std::move(segs), periodic);
}

SwitchingLaw SwitchingLaw::constant(std::size_t vertex, std::size_t vertexCount, double duration, bool periodic) {
    if (vertex >= vertexCount) throw Error(ErrorKind::input, "vertex index out of range");
    Vector w(vertexCount, 0.0);
    w[vertex] = 1.0;
    return SwitchingLaw({{duration, std::move(w)}}, periodic);
}

const char* toString(Classification c) noexcept {
    switch (c) {
        case Classification::decays: return "decays";
        case Classification::periodicOrbit: return "periodicOrbit";
        case Classification::inconclusive: return "inconclusive";
    }
    return "unknown";
}

}  // namespace pstab
