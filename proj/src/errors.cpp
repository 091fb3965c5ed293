#include "myco/errors.hpp"

#include <sstream>

namespace myco {

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
  std::ostringstream os;
  os << "configuration invalid (" << issues.size() << " issue"
     << (issues.size() == 1 ? "" : "s") << ")";
  for (const auto& s : issues) os << "\n  - " << s;
  return os.str();
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

DivergenceError::DivergenceError(long long iteration)
    : std::runtime_error("integration diverged: non-finite value at iteration " +
                         std::to_string(iteration)),
      iteration_(iteration) {}

}  // namespace myco
