// Copyright 2026 The cxlpredict Authors
// SPDX-License-Identifier: Apache-2.0

#include "cxlpredict/format.hpp"

#include <charconv>

namespace cxlpredict {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string format_hex(std::uint64_t v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, 16);
  (void)ec;
  return "0x" + std::string(buf, ptr);
}

}  // namespace cxlpredict
