#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace ergokit {

// Error codes are the upper-case names used in reports.
class Error : public std::runtime_error {
public:
    Error(std::string code, std::string msg)
        : std::runtime_error(code + ": " + msg), code_(std::move(code)), msg_(std::move(msg)) {}
    Error(std::string code, std::string msg, std::string wlo, std::string whi)
        : std::runtime_error(code + ": " + msg + " [" + wlo + ", " + whi + ")"),
          code_(std::move(code)), msg_(std::move(msg)), witness_(std::make_pair(std::move(wlo), std::move(whi))) {}

    const std::string& code() const { return code_; }
    const std::string& message() const { return msg_; }
    const std::optional<std::pair<std::string, std::string>>& witness() const { return witness_; }

private:
    std::string code_;
    std::string msg_;
    std::optional<std::pair<std::string, std::string>> witness_;
};

// Explicit step budget for iterative procedures.
class Budget {
public:
    explicit Budget(long n = 10000) : left_(n), total_(n) {}
    void spend(long n = 1) {
        left_ -= n;
        if (left_ < 0) throw Error("BUDGET_EXHAUSTED", "step budget of " + std::to_string(total_) + " spent");
    }
    long left() const { return left_; }
    long total() const { return total_; }

private:
    long left_;
    long total_;
};

}  // namespace ergokit
