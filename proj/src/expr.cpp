#include "ocm/expr.hpp"

#include "ocm/errors.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <system_error>

namespace ocm {

// ---------------------------------------------------------------------------
// Nodes

struct Expr::Node {
    Op op = Op::Constant;
    double value = 0.0;
    int index = 0;
    int exponent = 0;
    MultiIndex alpha;
    std::vector<Expr> children;
};

const char* op_name(Op op) {
    switch (op) {
    case Op::Constant: return "const";
    case Op::Coordinate: return "x";
    case Op::Jet: return "D";
    case Op::Neg: return "-";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Abs: return "abs";
    case Op::Sqrt: return "sqrt";
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Div: return "/";
    case Op::Pow: return "^";
    }
    return "?";
}

bool is_binary(Op op) {
    return op == Op::Add || op == Op::Sub || op == Op::Mul || op == Op::Div;
}

bool is_function(Op op) {
    return op == Op::Sin || op == Op::Cos || op == Op::Exp || op == Op::Log || op == Op::Abs ||
           op == Op::Sqrt;
}

Expr Expr::constant(double value) {
    auto n = std::make_shared<Node>();
    n->op = Op::Constant;
    n->value = value;
    return Expr(std::move(n));
}

Expr Expr::coordinate(int d) {
    if (d < 1) throw std::invalid_argument("coordinate index must be >= 1");
    auto n = std::make_shared<Node>();
    n->op = Op::Coordinate;
    n->index = d;
    return Expr(std::move(n));
}

Expr Expr::jet(int j, MultiIndex alpha) {
    if (j < 1) throw std::invalid_argument("unknown index must be >= 1");
    for (int a : alpha)
        if (a < 0) throw std::invalid_argument("multi-index entries must be >= 0");
    auto n = std::make_shared<Node>();
    n->op = Op::Jet;
    n->index = j;
    n->alpha = std::move(alpha);
    return Expr(std::move(n));
}

Expr Expr::unary(Op op, Expr child) {
    if (op != Op::Neg && !is_function(op)) throw std::invalid_argument("not a unary operator");
    auto n = std::make_shared<Node>();
    n->op = op;
    n->children.push_back(std::move(child));
    return Expr(std::move(n));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
    if (!is_binary(op)) throw std::invalid_argument("not a binary operator");
    auto n = std::make_shared<Node>();
    n->op = op;
    n->children.push_back(std::move(lhs));
    n->children.push_back(std::move(rhs));
    return Expr(std::move(n));
}

Expr Expr::power(Expr base, int exponent) {
    if (exponent < 0) throw std::invalid_argument("integer powers must have exponent >= 0");
    auto n = std::make_shared<Node>();
    n->op = Op::Pow;
    n->exponent = exponent;
    n->children.push_back(std::move(base));
    return Expr(std::move(n));
}

Op Expr::op() const { return node_->op; }
double Expr::value() const { return node_->value; }
int Expr::index() const { return node_->index; }
const MultiIndex& Expr::alpha() const { return node_->alpha; }
int Expr::exponent() const { return node_->exponent; }
std::size_t Expr::arity() const { return node_->children.size(); }
const Expr& Expr::child(std::size_t i) const { return node_->children.at(i); }

bool operator==(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return true;
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    if (x.op != y.op || x.children.size() != y.children.size()) return false;
    switch (x.op) {
    case Op::Constant:
        if (x.value != y.value) return false;
        break;
    case Op::Coordinate:
        if (x.index != y.index) return false;
        break;
    case Op::Jet:
        if (x.index != y.index || x.alpha != y.alpha) return false;
        break;
    case Op::Pow:
        if (x.exponent != y.exponent) return false;
        break;
    default:
        break;
    }
    for (std::size_t i = 0; i < x.children.size(); ++i)
        if (!(x.children[i] == y.children[i])) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
public:
    Parser(std::string_view text, int n, int K, int m, std::size_t line, std::size_t col_offset)
        : text_(text), n_(n), K_(K), m_(m), line0_(line), col0_(col_offset) {}

    Expr parse() {
        skip_ws();
        if (at_end()) fail(pos_, "empty expression");
        Expr e = expr();
        skip_ws();
        if (!at_end()) fail(pos_, std::string("unexpected '") + text_[pos_] + "'");
        return e;
    }

private:
    std::string_view text_;
    int n_, K_, m_;
    std::size_t line0_, col0_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(std::size_t at, const std::string& what) const {
        std::size_t line = line0_;
        std::size_t col = col0_ + 1;
        for (std::size_t i = 0; i < at && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(line, col, what);
    }

    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }

    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        skip_ws();
        if (peek() != c) {
            if (at_end()) fail(pos_, std::string("expected '") + c + "' but reached end of input");
            fail(pos_, std::string("expected '") + c + "' but found '" + peek() + "'");
        }
        ++pos_;
    }

    // expr := term { ("+"|"-") term }
    Expr expr() {
        Expr lhs = term();
        for (;;) {
            skip_ws();
            char c = peek();
            if (c != '+' && c != '-') return lhs;
            ++pos_;
            Expr rhs = term();
            lhs = Expr::binary(c == '+' ? Op::Add : Op::Sub, std::move(lhs), std::move(rhs));
        }
    }

    // term := factor { ("*"|"/") factor }
    Expr term() {
        Expr lhs = factor();
        for (;;) {
            skip_ws();
            char c = peek();
            if (c != '*' && c != '/') return lhs;
            ++pos_;
            Expr rhs = factor();
            lhs = Expr::binary(c == '*' ? Op::Mul : Op::Div, std::move(lhs), std::move(rhs));
        }
    }

    // factor := atom [ "^" integer ] | "-" factor
    Expr factor() {
        if (accept('-')) return Expr::unary(Op::Neg, factor());
        Expr base = atom();
        if (accept('^')) {
            skip_ws();
            std::size_t at = pos_;
            if (!std::isdigit(static_cast<unsigned char>(peek())))
                fail(at, "exponent must be a nonnegative integer");
            long k = integer();
            if (k > 1000000) fail(at, "exponent too large");
            return Expr::power(std::move(base), static_cast<int>(k));
        }
        return base;
    }

    long integer() {
        std::size_t start = pos_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        if (start == pos_) fail(start, "expected an integer");
        long v = 0;
        auto res = std::from_chars(text_.data() + start, text_.data() + pos_, v);
        if (res.ec != std::errc{}) fail(start, "integer out of range");
        return v;
    }

    double number() {
        std::size_t start = pos_;
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        if (peek() == '.') {
            ++pos_;
            while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        }
        if (peek() == 'e' || peek() == 'E') {
            std::size_t save = pos_;
            ++pos_;
            if (peek() == '+' || peek() == '-') ++pos_;
            if (!std::isdigit(static_cast<unsigned char>(peek()))) {
                pos_ = save;  // not an exponent; leave 'e' for the caller to reject
            } else {
                while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
            }
        }
        double v = 0.0;
        auto res = std::from_chars(text_.data() + start, text_.data() + pos_, v);
        if (res.ec != std::errc{} || res.ptr != text_.data() + pos_) fail(start, "malformed number");
        if (!std::isfinite(v)) fail(start, "number out of range");
        return v;
    }

    std::string word() {
        std::size_t start = pos_;
        while (std::isalpha(static_cast<unsigned char>(peek()))) ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    int index_after(std::size_t name_at, const char* what) {
        skip_ws();
        if (!std::isdigit(static_cast<unsigned char>(peek())))
            fail(name_at, std::string("expected an index after '") + what + "'");
        long v = integer();
        if (v > 1000000) fail(name_at, "index out of range");
        return static_cast<int>(v);
    }

    void check_unknown(int j, std::size_t at) {
        if (K_ == 0) fail(at, "right-hand sides may only reference coordinates x_d");
        if (j < 1) fail(at, "unknown index u" + std::to_string(j) + " must be >= 1");
        if (j > K_)
            fail(at, "reference to u" + std::to_string(j) + " but the system has K=" + std::to_string(K_) +
                         " unknowns");
    }

    Expr atom() {
        skip_ws();
        std::size_t at = pos_;
        char c = peek();
        if (at_end()) fail(at, "unexpected end of input");
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return Expr::constant(number());
        if (c == '(') {
            ++pos_;
            Expr e = expr();
            expect(')');
            return e;
        }
        if (!std::isalpha(static_cast<unsigned char>(c))) fail(at, std::string("unexpected '") + c + "'");

        std::string name = word();
        if (name == "x") {
            int d = index_after(at, "x");
            if (d < 1 || d > n_)
                fail(at, "coordinate index x" + std::to_string(d) + " outside 1.." + std::to_string(n_));
            return Expr::coordinate(d);
        }
        if (name == "u") {
            int j = index_after(at, "u");
            check_unknown(j, at);
            return Expr::jet(j, MultiIndex(static_cast<std::size_t>(n_), 0));
        }
        if (name == "D") return derivative(at);

        Op fn;
        if (name == "sin") fn = Op::Sin;
        else if (name == "cos") fn = Op::Cos;
        else if (name == "exp") fn = Op::Exp;
        else if (name == "log") fn = Op::Log;
        else if (name == "abs") fn = Op::Abs;
        else if (name == "sqrt") fn = Op::Sqrt;
        else fail(at, "unknown identifier '" + name + "'");
        expect('(');
        Expr arg = expr();
        expect(')');
        return Expr::unary(fn, std::move(arg));
    }

    // "D(" "u" index "," "(" index { "," index } ")" ")"
    Expr derivative(std::size_t at) {
        expect('(');
        skip_ws();
        std::size_t u_at = pos_;
        if (word() != "u") fail(u_at, "expected 'u' inside D(...)");
        int j = index_after(u_at, "u");
        check_unknown(j, u_at);
        expect(',');
        expect('(');
        MultiIndex alpha;
        std::size_t tuple_at = pos_;
        do {
            skip_ws();
            alpha.push_back(static_cast<int>(integer()));
        } while (accept(','));
        expect(')');
        expect(')');
        if (static_cast<int>(alpha.size()) != n_)
            fail(tuple_at, "multi-index " + to_string(alpha) + " must have exactly n=" + std::to_string(n_) +
                               " entries");
        if (order(alpha) > m_)
            fail(at, "derivative order " + std::to_string(order(alpha)) + " exceeds m=" + std::to_string(m_));
        return Expr::jet(j, std::move(alpha));
    }
};

} // namespace

Expr parse_expression(std::string_view text, int n, int K, int m, std::size_t line, std::size_t column_offset) {
    if (n < 1) throw std::invalid_argument("parse_expression: n must be >= 1");
    return Parser(text, n, K, m, line, column_offset).parse();
}

PdeSystem parse_system(std::string_view text, int n, int K, int m) {
    std::vector<Expr> comps;
    std::size_t line = 1;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view ln = text.substr(start, end - start);
        bool blank = std::all_of(ln.begin(), ln.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
        if (!blank) {
            if (static_cast<int>(comps.size()) == K)
                throw ParseError(line, 1, "more than K=" + std::to_string(K) + " equations");
            comps.push_back(parse_expression(ln, n, K, m, line, 0));
        }
        ++line;
        start = end + 1;
    }
    if (static_cast<int>(comps.size()) != K)
        throw ParseError(line > 1 ? line - 1 : 1, 1,
                         "expected K=" + std::to_string(K) + " equations, found " + std::to_string(comps.size()));
    return PdeSystem(n, K, m, std::move(comps));
}

// ---------------------------------------------------------------------------
// Printer

namespace {

std::string number_text(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string print_node(const Expr& e);

std::string wrapped(const Expr& e) {
    if (is_binary(e.op())) return "(" + print_node(e) + ")";
    return print_node(e);
}

std::string print_node(const Expr& e) {
    switch (e.op()) {
    case Op::Constant:
        return number_text(e.value());
    case Op::Coordinate:
        return "x" + std::to_string(e.index());
    case Op::Jet: {
        bool zero = std::all_of(e.alpha().begin(), e.alpha().end(), [](int a) { return a == 0; });
        if (zero) return "u" + std::to_string(e.index());
        return "D(u" + std::to_string(e.index()) + "," + to_string(e.alpha()) + ")";
    }
    case Op::Neg:
        return "-" + wrapped(e.child(0));
    case Op::Pow: {
        const Expr& b = e.child(0);
        bool paren = is_binary(b.op()) || b.op() == Op::Neg || b.op() == Op::Pow;
        std::string base = paren ? "(" + print_node(b) + ")" : print_node(b);
        return base + "^" + std::to_string(e.exponent());
    }
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
        return wrapped(e.child(0)) + " " + op_name(e.op()) + " " + wrapped(e.child(1));
    default:
        return std::string(op_name(e.op())) + "(" + print_node(e.child(0)) + ")";
    }
}

} // namespace

std::string print(const Expr& e) { return print_node(e); }

std::string print_system(const PdeSystem& sys) {
    std::string out;
    for (const auto& c : sys.components()) {
        out += print(c);
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Compiled evaluation

namespace {

void emit(const Expr& e, const MultiIndexSet& alphas, std::vector<std::size_t>& slots,
          std::size_t& depth, std::size_t& max_depth, auto&& push) {
    switch (e.op()) {
    case Op::Constant:
        push(Op::Constant, 0, e.value());
        max_depth = std::max(max_depth, ++depth);
        return;
    case Op::Coordinate:
        push(Op::Coordinate, e.index() - 1, 0.0);
        max_depth = std::max(max_depth, ++depth);
        return;
    case Op::Jet: {
        std::size_t a = alphas.index_of(e.alpha());
        if (a == alphas.size())
            throw std::invalid_argument("jet slot " + to_string(e.alpha()) + " not in the multi-index set");
        std::size_t slot = static_cast<std::size_t>(e.index() - 1) * alphas.size() + a;
        slots.push_back(slot);
        push(Op::Jet, static_cast<std::int32_t>(slot), 0.0);
        max_depth = std::max(max_depth, ++depth);
        return;
    }
    case Op::Pow:
        emit(e.child(0), alphas, slots, depth, max_depth, push);
        push(Op::Pow, e.exponent(), 0.0);
        return;
    default:
        break;
    }
    if (is_binary(e.op())) {
        emit(e.child(0), alphas, slots, depth, max_depth, push);
        emit(e.child(1), alphas, slots, depth, max_depth, push);
        push(e.op(), 0, 0.0);
        --depth;
        return;
    }
    emit(e.child(0), alphas, slots, depth, max_depth, push);
    push(e.op(), 0, 0.0);
}

double ipow(double b, int k) {
    double r = 1.0;
    while (k > 0) {
        if (k & 1) r *= b;
        b *= b;
        k >>= 1;
    }
    return r;
}

} // namespace

Program Program::compile(const Expr& e, const MultiIndexSet& alphas) {
    Program p;
    std::size_t depth = 0;
    auto push = [&p](Op op, std::int32_t arg, double value) { p.code_.push_back(Instr{op, arg, value}); };
    emit(e, alphas, p.slots_, depth, p.max_depth_, push);
    std::sort(p.slots_.begin(), p.slots_.end());
    p.slots_.erase(std::unique(p.slots_.begin(), p.slots_.end()), p.slots_.end());
    return p;
}

bool Program::references(std::size_t slot) const {
    return std::binary_search(slots_.begin(), slots_.end(), slot);
}

bool Program::eval(std::span<const double> x, std::span<const double> xi, double& out) const {
    constexpr std::size_t kInline = 64;
    std::array<double, kInline> small;
    std::vector<double> big;
    double* st = small.data();
    if (max_depth_ > kInline) {
        big.resize(max_depth_);
        st = big.data();
    }
    std::size_t sp = 0;
    for (const Instr& in : code_) {
        switch (in.op) {
        case Op::Constant: st[sp++] = in.value; break;
        case Op::Coordinate: st[sp++] = x[static_cast<std::size_t>(in.arg)]; break;
        case Op::Jet: st[sp++] = xi[static_cast<std::size_t>(in.arg)]; break;
        case Op::Neg: st[sp - 1] = -st[sp - 1]; break;
        case Op::Sin: st[sp - 1] = std::sin(st[sp - 1]); break;
        case Op::Cos: st[sp - 1] = std::cos(st[sp - 1]); break;
        case Op::Exp: st[sp - 1] = std::exp(st[sp - 1]); break;
        case Op::Abs: st[sp - 1] = std::fabs(st[sp - 1]); break;
        case Op::Log:
            if (!(st[sp - 1] > 0.0)) return false;
            st[sp - 1] = std::log(st[sp - 1]);
            break;
        case Op::Sqrt:
            if (st[sp - 1] < 0.0) return false;
            st[sp - 1] = std::sqrt(st[sp - 1]);
            break;
        case Op::Pow: st[sp - 1] = ipow(st[sp - 1], in.arg); break;
        case Op::Add: --sp; st[sp - 1] += st[sp]; break;
        case Op::Sub: --sp; st[sp - 1] -= st[sp]; break;
        case Op::Mul: --sp; st[sp - 1] *= st[sp]; break;
        case Op::Div:
            --sp;
            if (st[sp] == 0.0) return false;
            st[sp - 1] /= st[sp];
            break;
        }
        if (!std::isfinite(st[sp - 1])) return false;
    }
    out = st[0];
    return true;
}

// ---------------------------------------------------------------------------
// Systems

namespace {

void validate(const Expr& e, int n, int K, int m) {
    switch (e.op()) {
    case Op::Coordinate:
        if (e.index() > n) throw std::invalid_argument("coordinate index exceeds n");
        return;
    case Op::Jet:
        if (e.index() > K) throw std::invalid_argument("unknown index exceeds K");
        if (static_cast<int>(e.alpha().size()) != n) throw std::invalid_argument("multi-index arity != n");
        if (order(e.alpha()) > m) throw std::invalid_argument("derivative order exceeds m");
        return;
    default:
        for (std::size_t i = 0; i < e.arity(); ++i) validate(e.child(i), n, K, m);
    }
}

} // namespace

PdeSystem::PdeSystem(int n, int K, int m, std::vector<Expr> components)
    : n_(n), K_(K), m_(m), alphas_(n, m), components_(std::move(components)) {
    if (K < 1) throw std::invalid_argument("PdeSystem: K must be >= 1");
    if (static_cast<int>(components_.size()) != K)
        throw std::invalid_argument("PdeSystem: need exactly K component expressions");
    for (const auto& c : components_) {
        validate(c, n, K, m);
        programs_.push_back(Program::compile(c, alphas_));
    }
}

bool PdeSystem::try_eval(std::span<const double> x, std::span<const double> xi, std::span<double> out) const {
    for (std::size_t i = 0; i < programs_.size(); ++i)
        if (!programs_[i].eval(x, xi, out[i])) return false;
    return true;
}

std::vector<double> eval_F(const PdeSystem& sys, std::span<const double> x, std::span<const double> xi) {
    if (x.size() != static_cast<std::size_t>(sys.n())) throw std::invalid_argument("eval_F: x has wrong dimension");
    if (xi.size() != sys.M()) throw std::invalid_argument("eval_F: jet vector has wrong length");
    std::vector<double> out(static_cast<std::size_t>(sys.K()));
    for (std::size_t i = 0; i < out.size(); ++i)
        if (!sys.program(i).eval(x, xi, out[i]))
            throw EvalUndefined("F_" + std::to_string(i + 1) + " is undefined at this point (domain error)");
    return out;
}

Rhs::Rhs(int n, std::vector<Expr> components) : n_(n), components_(std::move(components)) {
    MultiIndexSet none(n, 0);
    for (const auto& c : components_) {
        validate(c, n, 0, 0);
        programs_.push_back(Program::compile(c, none));
    }
}

Rhs Rhs::parse(const std::vector<std::string>& texts, int n) {
    std::vector<Expr> comps;
    for (std::size_t i = 0; i < texts.size(); ++i) comps.push_back(parse_expression(texts[i], n, 0, 0, i + 1));
    return Rhs(n, std::move(comps));
}

bool Rhs::try_eval(std::span<const double> x, std::span<double> out) const {
    for (std::size_t i = 0; i < programs_.size(); ++i)
        if (!programs_[i].eval(x, {}, out[i])) return false;
    return true;
}

std::vector<double> Rhs::operator()(std::span<const double> x) const {
    std::vector<double> out(programs_.size());
    if (!try_eval(x, out)) throw EvalUndefined("right-hand side is undefined at this point (domain error)");
    return out;
}

} // namespace ocm
