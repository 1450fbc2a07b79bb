#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace azumaya {

/// Input that violates a model invariant. Carries every violation found.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<std::string> issues)
        : std::runtime_error(join(issues)), issues_(std::move(issues)) {}
    const std::vector<std::string>& issues() const { return issues_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s;
        for (const auto& x : v) s += (s.empty() ? "" : "; ") + x;
        return s;
    }
    std::vector<std::string> issues_;
};

}  // namespace azumaya
