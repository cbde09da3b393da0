#pragma once

#include <cstddef>
#include <functional>

#include <json.hpp>

#include "emw/error.hpp"
#include "emw/harness/config.hpp"
#include "emw/harness/output.hpp"
#include "emw/kernels.hpp"

namespace emw::harness {

struct SampleOptions {
  unsigned threads = 1;
  kernels::Isa isa = kernels::default_isa();
};

// Points per work block; each block owns a fixed row range, so output order never depends on threads.
inline constexpr std::size_t kBlockSize = 256;

// Calls fn(block) for every block in [0, count). The exception from the lowest failing block is rethrown.
void parallel_blocks(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

// Status column: 0 for a good row, otherwise the ErrorCode value plus one (values are NaN).
double status_of(ErrorCode code);

// Rows ordered x, y, z, t with t fastest.
Table sample_field(const RunConfig& cfg, const SampleOptions& opts = {});
// Rows ordered q, phi, t with t fastest; exact or approximate sources.
Table sample_sources(const RunConfig& cfg, const SampleOptions& opts = {});
// Closed-form impulse response (c = 1); for [surface] n > 1 the (-d/db)^(n-1) derivative with a gap column
// against the direct C_n drive.
Table impulse_response(const RunConfig& cfg, const SampleOptions& opts = {});

nlohmann::json config_metadata(const RunConfig& cfg);

}  // namespace emw::harness
