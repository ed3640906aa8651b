#pragma once

#include <cstddef>
#include <initializer_list>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "npconf/errors.hpp"

namespace npconf {

/// Finite multiset with exact natural-number multiplicities. Elements with
/// multiplicity zero are never stored, so two multisets are equal exactly when
/// their underlying maps are.
template <class T>
class Multiset {
 public:
  using container_type = std::map<T, std::size_t>;
  using const_iterator = typename container_type::const_iterator;

  Multiset() = default;
  Multiset(std::initializer_list<T> items) {
    for (const auto& item : items) add(item);
  }

  void add(const T& value, std::size_t n = 1) {
    if (n == 0) return;
    counts_[value] += n;
    total_ += n;
  }

  /// Removes n copies of value. Going below zero is an error, never a clamp.
  void remove(const T& value, std::size_t n = 1) {
    if (n == 0) return;
    auto it = counts_.find(value);
    if (it == counts_.end() || it->second < n)
      throw MultisetUnderflow("multiset difference would go negative");
    it->second -= n;
    total_ -= n;
    if (it->second == 0) counts_.erase(it);
  }

  std::size_t count(const T& value) const {
    auto it = counts_.find(value);
    return it == counts_.end() ? 0 : it->second;
  }

  /// Total number of elements counted with multiplicity.
  std::size_t size() const noexcept { return total_; }
  std::size_t distinct() const noexcept { return counts_.size(); }
  bool empty() const noexcept { return total_ == 0; }

  /// True iff other ⊆ *this.
  bool includes(const Multiset& other) const {
    for (const auto& [value, n] : other.counts_)
      if (count(value) < n) return false;
    return true;
  }

  Multiset& operator+=(const Multiset& other) {
    for (const auto& [value, n] : other.counts_) add(value, n);
    return *this;
  }

  Multiset& operator-=(const Multiset& other) {
    if (!includes(other))
      throw MultisetUnderflow("multiset difference would go negative");
    for (const auto& [value, n] : other.counts_) remove(value, n);
    return *this;
  }

  friend Multiset operator+(Multiset lhs, const Multiset& rhs) { return lhs += rhs; }
  friend Multiset operator-(Multiset lhs, const Multiset& rhs) { return lhs -= rhs; }

  const_iterator begin() const noexcept { return counts_.begin(); }
  const_iterator end() const noexcept { return counts_.end(); }
  const container_type& counts() const noexcept { return counts_; }

  /// Elements expanded by multiplicity, in ascending order.
  std::vector<T> elements() const {
    std::vector<T> out;
    out.reserve(total_);
    for (const auto& [value, n] : counts_) out.insert(out.end(), n, value);
    return out;
  }

  friend bool operator==(const Multiset& a, const Multiset& b) { return a.counts_ == b.counts_; }
  friend auto operator<=>(const Multiset& a, const Multiset& b) { return a.counts_ <=> b.counts_; }

 private:
  container_type counts_;
  std::size_t total_ = 0;
};

template <class T>
std::ostream& operator<<(std::ostream& os, const Multiset<T>& ms) {
  os << '{';
  bool first = true;
  for (const auto& [value, n] : ms) {
    if (!first) os << ", ";
    first = false;
    os << value;
    if (n > 1) os << '^' << n;
  }
  return os << '}';
}

}  // namespace npconf
