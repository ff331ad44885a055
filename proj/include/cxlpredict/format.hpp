// Copyright 2026 The cxlpredict Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>

namespace cxlpredict {

/// Shortest round-trip decimal form; integral values print without a
/// fractional part. Used everywhere bytes must be reproducible.
std::string format_double(double v);

std::string format_hex(std::uint64_t v);  // 0x-prefixed

}  // namespace cxlpredict
