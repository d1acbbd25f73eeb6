#pragma once

#include "ocm/multi_index.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ocm {

enum class Op : std::uint8_t {
    Constant,
    Coordinate,
    Jet,
    Neg,
    Sin,
    Cos,
    Exp,
    Log,
    Abs,
    Sqrt,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
};

const char* op_name(Op op);
bool is_binary(Op op);
bool is_function(Op op);

/// Immutable expression tree node handle. Copies share structure; trees are
/// never mutated after construction and are safe to share between threads.
class Expr {
public:
    static Expr constant(double value);
    /// Coordinate x_d, d is 1-based.
    static Expr coordinate(int d);
    /// Jet slot D^alpha u_j, j is 1-based.
    static Expr jet(int j, MultiIndex alpha);
    static Expr unary(Op op, Expr child);
    static Expr binary(Op op, Expr lhs, Expr rhs);
    static Expr power(Expr base, int exponent);

    Op op() const;
    double value() const;
    /// Coordinate index d, or jet component j (both 1-based).
    int index() const;
    const MultiIndex& alpha() const;
    int exponent() const;
    std::size_t arity() const;
    const Expr& child(std::size_t i) const;

    /// Structural equality (constants compared exactly).
    friend bool operator==(const Expr& a, const Expr& b);

private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// Postfix program compiled from an Expr against a jet layout.
///
/// Jet slot (j, alpha) reads xi[(j-1) * |alphas| + index_of(alpha)].
class Program {
public:
    Program() = default;
    static Program compile(const Expr& e, const MultiIndexSet& alphas);

    /// Evaluates; returns false on a domain error or a non-finite result.
    bool eval(std::span<const double> x, std::span<const double> xi, double& out) const;

    /// Sorted, deduplicated jet slots the expression reads.
    const std::vector<std::size_t>& slots() const { return slots_; }
    bool references(std::size_t slot) const;

private:
    struct Instr {
        Op op;
        std::int32_t arg;  // coordinate index, jet slot, or exponent
        double value;
    };
    std::vector<Instr> code_;
    std::vector<std::size_t> slots_;
    std::size_t max_depth_ = 0;
};

/// The operator T(x, D) of a system of K equations in K unknowns, order <= m,
/// in n spatial variables.
class PdeSystem {
public:
    PdeSystem(int n, int K, int m, std::vector<Expr> components);

    int n() const { return n_; }
    int K() const { return K_; }
    int m() const { return m_; }
    const MultiIndexSet& alphas() const { return alphas_; }
    /// Jet dimension K * |alphas|.
    std::size_t M() const { return static_cast<std::size_t>(K_) * alphas_.size(); }
    std::size_t slot(int j, std::size_t alpha_index) const {
        return static_cast<std::size_t>(j - 1) * alphas_.size() + alpha_index;
    }

    const std::vector<Expr>& components() const { return components_; }
    const Program& program(std::size_t i) const { return programs_[i]; }

    /// Non-throwing evaluation of all K components; false on a domain error.
    bool try_eval(std::span<const double> x, std::span<const double> xi, std::span<double> out) const;

private:
    int n_;
    int K_;
    int m_;
    MultiIndexSet alphas_;
    std::vector<Expr> components_;
    std::vector<Program> programs_;
};

/// Parses one expression. Positions in errors are reported relative to
/// (line, column_offset + 1) of the first character.
Expr parse_expression(std::string_view text, int n, int K, int m,
                      std::size_t line = 1, std::size_t column_offset = 0);

/// Parses K expressions, one per nonblank line.
PdeSystem parse_system(std::string_view text, int n, int K, int m);

/// Canonical, fully parenthesised form; parse_expression(print(e)) == e.
std::string print(const Expr& e);
std::string print_system(const PdeSystem& sys);

/// (F_1(x, xi), ..., F_K(x, xi)). Throws EvalUndefined on a domain error.
std::vector<double> eval_F(const PdeSystem& sys, std::span<const double> x, std::span<const double> xi);

/// Right-hand side f(x) = (f_1, ..., f_K): expressions in the coordinates only.
class Rhs {
public:
    Rhs(int n, std::vector<Expr> components);
    static Rhs parse(const std::vector<std::string>& texts, int n);

    int n() const { return n_; }
    std::size_t K() const { return programs_.size(); }
    const std::vector<Expr>& components() const { return components_; }

    bool try_eval(std::span<const double> x, std::span<double> out) const;
    /// Throws EvalUndefined.
    std::vector<double> operator()(std::span<const double> x) const;

private:
    int n_;
    std::vector<Expr> components_;
    std::vector<Program> programs_;
};

} // namespace ocm
