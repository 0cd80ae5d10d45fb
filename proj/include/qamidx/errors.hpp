#pragma once

#include <stdexcept>
#include <string>

namespace qamidx {

// A code whose encoder is not a bijection on Z_M^K (determinant not a unit).
class invalid_code_error : public std::runtime_error {
public:
    explicit invalid_code_error(const std::string& what) : std::runtime_error(what) {}
};

// An operation would exceed a configured enumeration or work budget.
class budget_error : public std::runtime_error {
public:
    explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace qamidx
