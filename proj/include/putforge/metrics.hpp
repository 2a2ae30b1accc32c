#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "putforge/model.hpp"

namespace putforge {

// Decision points each template adds to main.
std::int64_t cyclomatic_increment(Kind kind);

// 1 (base) + 1 (argc guard) + per-item increments. do_something, when
// present, is a separate function of complexity 1.
std::int64_t cyclomatic(const InstantiatedSequence& seq);

// Statements executed on the way to fail() for the given trigger. Throws
// Error when argv does not reach fail().
//
// Cost model (L = argument length):
//   argc guard 1, IC/SC 1, FL 2 + 4e, PC 3 + 4*ceil(L/2), CC 4 + 3L + matches,
//   fail statement 1.
std::int64_t path_statements(const InstantiatedSequence& seq, std::span<const std::string> trigger);

Metrics compute_metrics(const InstantiatedSequence& seq, std::span<const std::string> trigger);

}  // namespace putforge
