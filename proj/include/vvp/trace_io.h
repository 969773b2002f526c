#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "vvp/signal_fusion.h"

namespace vvp {

inline constexpr std::string_view kTraceCsvHeader =
    "t,v_ego,dist_front,v_front,dist_tls";

// Parses the trace schema. Empty dist_front / v_front / dist_tls fields mean
// "absent". Throws InputError (with line number) on any schema violation,
// including non-contiguous timestamps.
std::vector<SignalFrame> ReadTraceCsv(std::istream& in);
std::vector<SignalFrame> ReadTraceCsvFile(const std::filesystem::path& path);

void WriteTraceCsv(std::ostream& out, std::span<const SignalFrame> frames);
void WriteTraceCsvFile(const std::filesystem::path& path,
                       std::span<const SignalFrame> frames);

}  // namespace vvp
