#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace primec {

/// Dense variable identifier. Input variables of a formula occupy the ids
/// [0, n); encoders allocate auxiliaries above that prefix.
struct Var {
    std::uint32_t index = 0;

    constexpr Var() = default;
    constexpr explicit Var(std::uint32_t i) : index(i) {}

    friend constexpr auto operator<=>(Var, Var) = default;
};

/// A literal packs a variable and a sign as 2*var + negated, MiniSat style,
/// so literals index arrays directly and x < !x for the same variable.
class Lit {
public:
    constexpr Lit() = default;
    constexpr Lit(Var v, bool negated) : code_(2 * v.index + (negated ? 1u : 0u)) {}

    static constexpr Lit pos(Var v) { return Lit(v, false); }
    static constexpr Lit neg(Var v) { return Lit(v, true); }
    static constexpr Lit from_code(std::uint32_t code) {
        Lit l;
        l.code_ = code;
        return l;
    }

    constexpr Var var() const { return Var(code_ >> 1); }
    constexpr bool negated() const { return (code_ & 1u) != 0; }
    constexpr std::uint32_t code() const { return code_; }

    constexpr Lit operator~() const { return from_code(code_ ^ 1u); }

    friend constexpr auto operator<=>(Lit, Lit) = default;

private:
    std::uint32_t code_ = 0;
};

/// Malformed user input (syntax errors, unreadable files, bad flags).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public InputError {
public:
    ParseError(const std::string& what, int line, int column)
        : InputError(what + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
          line_(line), column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

/// A documented precondition or postcondition did not hold.
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// An exact oracle was asked to work beyond its size limit.
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TimeoutError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace primec

template <>
struct std::hash<primec::Lit> {
    std::size_t operator()(primec::Lit l) const noexcept { return std::hash<std::uint32_t>{}(l.code()); }
};

template <>
struct std::hash<primec::Var> {
    std::size_t operator()(primec::Var v) const noexcept { return std::hash<std::uint32_t>{}(v.index); }
};
