#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <random>

#include <omp.h>

namespace pstab {

/// Execution policy for data-parallel sweeps. `serial` is the reference path;
/// both produce identical results because every sweep writes per-index slots
/// and reduces them afterwards in index order.
enum class Exec { serial, parallel };

template <class Body>
void forEachIndex(std::size_t n, Exec exec, Body&& body) {
    if (exec == Exec::serial) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(pstab_for_each_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
}

/// SplitMix64 finaliser; decorrelates (seed, index) pairs.
constexpr std::uint64_t mixSeed(std::uint64_t seed, std::uint64_t index) noexcept {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Per-item generator so sweep results do not depend on thread scheduling.
inline std::mt19937_64 itemRng(std::uint64_t seed, std::uint64_t index) {
    return std::mt19937_64(mixSeed(seed, index));
}

}  // namespace pstab
