#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace npconf {

struct Violation {
  std::string code;     ///< stable machine-readable kind, e.g. "not-on-path"
  std::string subject;  ///< the offending node, arc, agent, ...
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

class ValidationReport {
 public:
  void add(std::string code, std::string subject, std::string message) {
    violations_.push_back({std::move(code), std::move(subject), std::move(message)});
  }

  /// Appends another report, prefixing every subject with `scope/`.
  void merge(const ValidationReport& other, const std::string& scope = {}) {
    for (auto v : other.violations_) {
      if (!scope.empty()) v.subject = scope + "/" + v.subject;
      violations_.push_back(std::move(v));
    }
  }

  bool ok() const noexcept { return violations_.empty(); }
  const std::vector<Violation>& violations() const noexcept { return violations_; }

  std::size_t count(const std::string& code) const {
    std::size_t n = 0;
    for (const auto& v : violations_) n += v.code == code;
    return n;
  }

 private:
  std::vector<Violation> violations_;
};

inline std::ostream& operator<<(std::ostream& os, const ValidationReport& r) {
  for (const auto& v : r.violations())
    os << "[" << v.code << "] " << v.subject << ": " << v.message << "\n";
  return os;
}

}  // namespace npconf
