#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "json.hpp"

#include "pstab/lift.hpp"
#include "pstab/planar.hpp"
#include "pstab/simcore.hpp"
#include "pstab/smallmat.hpp"

namespace pstab {

using Json = nlohmann::json;

// Matrix:       {"rows": n, "cols": m, "data": [row-major]}
// PlanarPair:   {"a0": Matrix, "a1": Matrix, "tau": number | null}
// LiftedFamily: {"b": [Matrix x 4], "alpha": number, "source": PlanarPair}
// Law:          {"segments": [{"duration": d, "weights": [...]}], "periodic": bool}
//
// Readers reject unknown keys and wrong types with ErrorKind::input. Doubles are
// written in shortest round-trip form, so write-then-read is exact.

Json toJson(const SmallMatrix& m);
Json toJson(const PlanarPair& p);
Json toJson(const LiftedFamily& f);
Json toJson(const SwitchingLaw& law);

SmallMatrix matrixFromJson(const Json& j);
PlanarPair planarPairFromJson(const Json& j);
LiftedFamily liftedFamilyFromJson(const Json& j);
SwitchingLaw lawFromJson(const Json& j);

/// True for objects carrying the lift's "b" key.
bool isLiftedFamily(const Json& j);

/// Family of either a PlanarPair or a LiftedFamily document.
SwitchedFamily familyFromJson(const Json& j);

/// Two-space indented dump with a trailing newline; keys are sorted.
std::string dumpJson(const Json& j);

/// ErrorKind::io on open/read failure, ErrorKind::input on malformed JSON.
Json readJsonFile(const std::filesystem::path& path);
/// ErrorKind::io on failure.
void writeTextFile(const std::filesystem::path& path, const std::string& text);

/// Header t,x1..xd,norm; one row per sample, 17 significant digits.
void writeTrajectoryCsv(std::ostream& out, const Trajectory& traj);
std::string trajectoryCsv(const Trajectory& traj);

}  // namespace pstab
