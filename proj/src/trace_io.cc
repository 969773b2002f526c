#include "vvp/trace_io.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "vvp/errors.h"

namespace vvp {
namespace {

[[noreturn]] void Fail(std::size_t line, const std::string& what) {
  throw InputError("trace line " + std::to_string(line) + ": " + what);
}

std::vector<std::string_view> SplitFields(std::string_view row) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = row.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(row.substr(start));
      return fields;
    }
    fields.push_back(row.substr(start, comma - start));
    start = comma + 1;
  }
}

double ParseReal(std::string_view text, std::size_t line, const char* name) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    Fail(line, std::string("bad ") + name + " '" + std::string(text) + "'");
  }
  return value;
}

std::optional<double> ParseOptionalReal(std::string_view text, std::size_t line,
                                        const char* name) {
  if (text.empty()) return std::nullopt;
  return ParseReal(text, line, name);
}

void AppendReal(std::string& out, double value) {
  char buffer[64];
  const int n = std::snprintf(buffer, sizeof(buffer), "%.6f", value);
  out.append(buffer, static_cast<std::size_t>(n));
}

}  // namespace

std::vector<SignalFrame> ReadTraceCsv(std::istream& in) {
  std::string row;
  std::size_t line = 1;
  if (!std::getline(in, row)) Fail(line, "missing header");
  if (!row.empty() && row.back() == '\r') row.pop_back();
  if (row != kTraceCsvHeader) {
    Fail(line, "header must be '" + std::string(kTraceCsvHeader) + "'");
  }

  std::vector<SignalFrame> frames;
  while (std::getline(in, row)) {
    ++line;
    if (!row.empty() && row.back() == '\r') row.pop_back();
    if (row.empty()) continue;
    const auto fields = SplitFields(row);
    if (fields.size() != 5) {
      Fail(line, "expected 5 fields, got " + std::to_string(fields.size()));
    }
    SignalFrame frame;
    const auto [ptr, ec] = std::from_chars(
        fields[0].data(), fields[0].data() + fields[0].size(), frame.t);
    if (ec != std::errc() || ptr != fields[0].data() + fields[0].size()) {
      Fail(line, "t must be an integer, got '" + std::string(fields[0]) + "'");
    }
    frame.v_ego = ParseReal(fields[1], line, "v_ego");
    frame.dist_front = ParseOptionalReal(fields[2], line, "dist_front");
    frame.v_front = ParseOptionalReal(fields[3], line, "v_front");
    frame.dist_tls = ParseOptionalReal(fields[4], line, "dist_tls");
    try {
      ValidateFrame(frame);
    } catch (const InputError& e) {
      Fail(line, e.what());
    }
    if (!frames.empty() && frame.t != frames.back().t + 1) {
      Fail(line, "t must increase by 1 (previous " +
                     std::to_string(frames.back().t) + ")");
    }
    frames.push_back(frame);
  }
  return frames;
}

std::vector<SignalFrame> ReadTraceCsvFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open trace " + path.string());
  return ReadTraceCsv(in);
}

void WriteTraceCsv(std::ostream& out, std::span<const SignalFrame> frames) {
  std::string text(kTraceCsvHeader);
  text += '\n';
  for (const SignalFrame& f : frames) {
    text += std::to_string(f.t);
    text += ',';
    AppendReal(text, f.v_ego);
    text += ',';
    if (f.dist_front) AppendReal(text, *f.dist_front);
    text += ',';
    if (f.v_front) AppendReal(text, *f.v_front);
    text += ',';
    if (f.dist_tls) AppendReal(text, *f.dist_tls);
    text += '\n';
  }
  out << text;
}

void WriteTraceCsvFile(const std::filesystem::path& path,
                       std::span<const SignalFrame> frames) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write trace " + path.string());
  WriteTraceCsv(out, frames);
}

}  // namespace vvp
