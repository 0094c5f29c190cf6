#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace gsana {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;
using TypeId = std::uint32_t;
using TokenId = std::uint32_t;

inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();

// Which of the two input graphs a vertex belongs to.
enum class Side : std::uint8_t { kFirst = 0, kSecond = 1 };

inline constexpr std::size_t side_index(Side s) {
  return static_cast<std::size_t>(s);
}

struct VertexPair {
  VertexId first = kNoVertex;
  VertexId second = kNoVertex;

  friend bool operator==(const VertexPair&, const VertexPair&) = default;
  friend auto operator<=>(const VertexPair&, const VertexPair&) = default;
};

// Raised for malformed or inconsistent input files. Carries the file name and
// the 1-based line number when one applies (0 otherwise).
class InputError : public std::runtime_error {
 public:
  InputError(std::string file, std::size_t line, const std::string& message)
      : std::runtime_error(format(file, line, message)),
        file_(std::move(file)),
        line_(line) {}

  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }

 private:
  static std::string format(const std::string& file, std::size_t line,
                            const std::string& message) {
    std::string out = file;
    if (line > 0) out += ":" + std::to_string(line);
    if (!out.empty()) out += ": ";
    return out + message;
  }

  std::string file_;
  std::size_t line_;
};

}  // namespace gsana
