#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace ltlcoord::cli {

struct BenchOptions {
    std::vector<std::size_t> agents{10, 50, 150, 350};
    std::vector<std::size_t> actions{1, 2, 3};
    std::size_t trials = 5;
    std::uint64_t seed = 1;
    bool timing = true;
};

struct BenchCell {
    std::size_t N = 0;
    std::size_t M = 0;
    std::size_t trials = 0;
    std::size_t kept_min = 0;
    std::size_t kept_max = 0;
    bool costs_equal = true;
    bool bound_ok = true;  // M <= |kept| <= M^2 in every trial
    double mean_cost = 0.0;
    // Median seconds per call; zero when timing is off. `ingest` is feeding
    // every reply to the streaming filter and extracting the kept instance.
    double unfiltered = 0.0;
    double filtered = 0.0;
    double ingest = 0.0;
};

std::vector<BenchCell> bench_filtering(const BenchOptions& opt);

// Deterministic part: sizes and cost checks.
std::string filtering_csv(const std::vector<BenchCell>& cells);
std::string timing_csv(const std::vector<BenchCell>& cells);

} // namespace ltlcoord::cli
