#include "pstab/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace pstab {

namespace {

void requireObject(const Json& j, std::initializer_list<const char*> allowed, const char* what) {
    if (!j.is_object()) throw Error(ErrorKind::input, std::string(what) + " must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const char* a : allowed) known = known || key == a;
        if (!known) throw Error(ErrorKind::input, std::string("unknown key '") + key + "' in " + what);
    }
}

const Json& field(const Json& j, const char* key, const char* what) {
    const auto it = j.find(key);
    if (it == j.end()) throw Error(ErrorKind::input, std::string("missing key '") + key + "' in " + what);
    return *it;
}

double number(const Json& j, const char* what) {
    if (!j.is_number()) throw Error(ErrorKind::input, std::string(what) + " must be a number");
    return j.get<double>();
}

std::vector<double> numbers(const Json& j, const char* what) {
    if (!j.is_array()) throw Error(ErrorKind::input, std::string(what) + " must be an array");
    std::vector<double> out;
    out.reserve(j.size());
    for (const Json& v : j) out.push_back(number(v, what));
    return out;
}

std::size_t count(const Json& j, const char* what) {
    if (!j.is_number_unsigned()) throw Error(ErrorKind::input, std::string(what) + " must be a non-negative integer");
    return j.get<std::size_t>();
}

}  // namespace

Json toJson(const SmallMatrix& m) {
    const auto d = m.data();
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::vector<double>(d.begin(), d.end())}};
}

Json toJson(const PlanarPair& p) {
    Json j = {{"a0", toJson(p.a0)}, {"a1", toJson(p.a1)}};
    j["tau"] = p.tau ? Json(*p.tau) : Json(nullptr);
    return j;
}

Json toJson(const LiftedFamily& f) {
    Json b = Json::array();
    for (const SmallMatrix& m : f.b) b.push_back(toJson(m));
    return {{"b", b}, {"alpha", f.alpha}, {"source", toJson(f.source)}};
}

Json toJson(const SwitchingLaw& law) {
    Json segs = Json::array();
    for (const Segment& s : law.segments()) segs.push_back({{"duration", s.duration}, {"weights", s.weights}});
    return {{"segments", segs}, {"periodic", law.periodic()}};
}

SmallMatrix matrixFromJson(const Json& j) {
    requireObject(j, {"rows", "cols", "data"}, "matrix");
    const std::size_t rows = count(field(j, "rows", "matrix"), "rows");
    const std::size_t cols = count(field(j, "cols", "matrix"), "cols");
    if (rows < 1 || cols < 1 || rows > SmallMatrix::kMaxDim || cols > SmallMatrix::kMaxDim) {
        throw Error(ErrorKind::input, "matrix dimensions out of range");
    }
    return SmallMatrix(rows, cols, numbers(field(j, "data", "matrix"), "matrix data"));
}

PlanarPair planarPairFromJson(const Json& j) {
    requireObject(j, {"a0", "a1", "tau"}, "planar pair");
    PlanarPair p{matrixFromJson(field(j, "a0", "planar pair")), matrixFromJson(field(j, "a1", "planar pair")), {}};
    if (p.a0.rows() != 2 || p.a0.cols() != 2 || p.a1.rows() != 2 || p.a1.cols() != 2) {
        throw Error(ErrorKind::input, "planar pair needs 2x2 matrices");
    }
    if (const auto it = j.find("tau"); it != j.end() && !it->is_null()) p.tau = number(*it, "tau");
    return p;
}

LiftedFamily liftedFamilyFromJson(const Json& j) {
    requireObject(j, {"b", "alpha", "source"}, "lifted family");
    const Json& b = field(j, "b", "lifted family");
    if (!b.is_array() || b.size() != 4) throw Error(ErrorKind::input, "lifted family needs four matrices");
    LiftedFamily f;
    for (const Json& m : b) {
        f.b.push_back(matrixFromJson(m));
        if (f.b.back().rows() != 4 || f.b.back().cols() != 4) throw Error(ErrorKind::input, "lift matrices are 4x4");
    }
    f.alpha = number(field(j, "alpha", "lifted family"), "alpha");
    f.source = planarPairFromJson(field(j, "source", "lifted family"));
    return f;
}

SwitchingLaw lawFromJson(const Json& j) {
    requireObject(j, {"segments", "periodic"}, "law");
    const Json& segs = field(j, "segments", "law");
    if (!segs.is_array()) throw Error(ErrorKind::input, "law segments must be an array");
    std::vector<Segment> out;
    for (const Json& s : segs) {
        requireObject(s, {"duration", "weights"}, "segment");
        out.push_back({number(field(s, "duration", "segment"), "duration"),
                       numbers(field(s, "weights", "segment"), "weights")});
    }
    const Json& periodic = field(j, "periodic", "law");
    if (!periodic.is_boolean()) throw Error(ErrorKind::input, "periodic must be a boolean");
    return SwitchingLaw(std::move(out), periodic.get<bool>());
}

bool isLiftedFamily(const Json& j) { return j.is_object() && j.contains("b"); }

SwitchedFamily familyFromJson(const Json& j) {
    return isLiftedFamily(j) ? liftedFamilyFromJson(j).family() : planarPairFromJson(j).family();
}

std::string dumpJson(const Json& j) { return j.dump(2) + "\n"; }

Json readJsonFile(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::input, path.string() + ": " + e.what());
    }
}

void writeTextFile(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::io, "cannot open " + path.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw Error(ErrorKind::io, "write failed for " + path.string());
}

void writeTrajectoryCsv(std::ostream& out, const Trajectory& traj) {
    if (traj.samples.empty()) return;
    const std::size_t d = traj.samples.front().x.size();
    out << "t";
    for (std::size_t i = 1; i <= d; ++i) out << ",x" << i;
    out << ",norm\n";
    char buf[32];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf;
    };
    for (const Sample& s : traj.samples) {
        put(s.t);
        for (double v : s.x) {
            out << ',';
            put(v);
        }
        out << ',';
        put(norm2(s.x));
        out << '\n';
    }
}

std::string trajectoryCsv(const Trajectory& traj) {
    std::ostringstream out;
    writeTrajectoryCsv(out, traj);
    return out.str();
}

}  // namespace pstab
