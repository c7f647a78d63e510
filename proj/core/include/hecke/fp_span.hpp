#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hecke/matrix.hpp"

namespace hecke {

/// Incrementally built span of vectors over F_p, remembering how each
/// echelon row was formed from the inserted vectors.
class FpSpan {
 public:
  FpSpan(std::int64_t p, std::size_t length) : p_(p), len_(length) {}

  std::size_t size() const noexcept { return count_; }
  std::size_t length() const noexcept { return len_; }
  std::int64_t prime() const noexcept { return p_; }

  /// Inserts v; returns true if it was independent of the span.
  bool insert(const std::vector<std::int64_t>& v);
  bool contains(const std::vector<std::int64_t>& v) const;
  /// Coordinates of v with respect to the inserted independent vectors,
  /// in insertion order.
  std::optional<std::vector<std::int64_t>> coordinates(const std::vector<std::int64_t>& v) const;

 private:
  struct Row {
    std::vector<std::int64_t> v;
    std::vector<std::int64_t> comb;
    std::size_t pivot;
  };
  std::vector<std::int64_t> reduce(std::vector<std::int64_t>& v, std::vector<std::int64_t>* comb) const;

  std::int64_t p_;
  std::size_t len_;
  std::size_t count_ = 0;
  std::vector<Row> rows_;
};

/// Entries of a matrix reduced mod p, flattened row-major.
std::vector<std::int64_t> flatten_mod(const IntMatrix& m, std::int64_t p);

}  // namespace hecke
