#pragma once

// Fixed-schedule range reduction. The index range [0, n) is cut into
// blocks of kBlock; each block is folded left to right into a fresh
// accumulator and the block results are merged along a fixed pairwise
// tree. The serial and OpenMP versions run the same schedule, so any
// accumulator whose add/merge are deterministic gives identical bits.
//
// Acc needs: default constructor, merge(const Acc&).
// Body is called as body(i, acc) and folds term i into acc.

#include <algorithm>
#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace horolab {

inline constexpr std::size_t kBlock = std::size_t{1} << 14;

enum class Exec { serial, parallel };

namespace detail {

template <class Acc>
Acc tree_merge(std::vector<Acc>& parts) {
    if (parts.empty()) return Acc{};
    std::size_t width = parts.size();
    while (width > 1) {
        std::size_t half = (width + 1) / 2;
        for (std::size_t i = 0; i + half < width; ++i) parts[i].merge(parts[i + half]);
        width = half;
    }
    return parts[0];
}

template <class Acc, class Body>
Acc fold_block(std::size_t lo, std::size_t hi, const Acc& seed, Body& body) {
    Acc acc = seed;
    for (std::size_t i = lo; i < hi; ++i) body(i, acc);
    return acc;
}

} // namespace detail

// Reference path: single thread, same schedule.
template <class Acc, class Body>
Acc reduce_serial(std::size_t n, Body body, const Acc& seed = Acc{}) {
    const std::size_t nb = (n + kBlock - 1) / kBlock;
    std::vector<Acc> parts(nb, seed);
    for (std::size_t b = 0; b < nb; ++b)
        parts[b] = detail::fold_block(b * kBlock, std::min(n, (b + 1) * kBlock), seed, body);
    return nb ? detail::tree_merge(parts) : seed;
}

template <class Acc, class Body>
Acc reduce_parallel(std::size_t n, Body body, const Acc& seed = Acc{}) {
    const std::size_t nb = (n + kBlock - 1) / kBlock;
    std::vector<Acc> parts(nb, seed);
    const long long nbl = static_cast<long long>(nb);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long b = 0; b < nbl; ++b) {
        const std::size_t ub = static_cast<std::size_t>(b);
        parts[ub] = detail::fold_block(ub * kBlock, std::min(n, (ub + 1) * kBlock), seed, body);
    }
    return nb ? detail::tree_merge(parts) : seed;
}

template <class Acc, class Body>
Acc reduce(Exec exec, std::size_t n, Body body, const Acc& seed = Acc{}) {
    return exec == Exec::serial ? reduce_serial<Acc>(n, body, seed) : reduce_parallel<Acc>(n, body, seed);
}

// Default execution mode for library entry points (parallel unless the
// caller pinned it, e.g. tests comparing the two paths).
Exec default_exec();
void set_default_exec(Exec e);
void set_thread_count(int n);

} // namespace horolab
