#include "isoblock/random_invariants.hpp"

#include <algorithm>
#include <cctype>

namespace isoblock {

Expr Expr::apply(std::string op, Expr arg)
{
    Expr e{Kind::unary, 0, std::move(op), {}};
    e.args.push_back(std::move(arg));
    return e;
}

Expr Expr::apply(std::string op, Expr lhs, Expr rhs)
{
    Expr e{Kind::binary, 0, std::move(op), {}};
    e.args.push_back(std::move(lhs));
    e.args.push_back(std::move(rhs));
    return e;
}

int Expr::depth() const
{
    int d = 0;
    for (const Expr &a : args)
        d = std::max(d, a.depth() + 1);
    return d;
}

void SelectionConfig::validate() const
{
    if (max_selected > pool_size)
        throw FormulaError("max_selected must not exceed pool_size");
    if (max_depth < 1)
        throw FormulaError("max_depth must be at least 1");
    if (max_vars < 1)
        throw FormulaError("max_vars must be at least 1");
    if (sample_min < 1)
        throw FormulaError("sample_min must be at least 1");
    if (!(sample_fraction >= 0.0 && sample_fraction <= 1.0))
        throw FormulaError("sample_fraction must lie in [0, 1]");
}

namespace {

constexpr int max_generation_attempts = 1000;

struct Generator {
    const Signature &sig;
    const SelectionConfig &cfg;
    Rng &rng;
    std::vector<std::size_t> unary;
    std::vector<std::size_t> binary;
    int num_variables = 1;

    std::size_t pick(std::size_t count)
    {
        return std::uniform_int_distribution<std::size_t>(0, count - 1)(rng);
    }

    Expr build(int level)
    {
        enum class Choice { leaf, unary, binary };
        Choice choice = Choice::leaf;
        if (level < cfg.max_depth) {
            Choice options[3];
            std::size_t count = 0;
            options[count++] = Choice::leaf;
            if (!unary.empty())
                options[count++] = Choice::unary;
            if (!binary.empty())
                options[count++] = Choice::binary;
            choice = options[pick(count)];
        }
        switch (choice) {
        case Choice::unary:
            return Expr::apply(sig[unary[pick(unary.size())]].name, build(level + 1));
        case Choice::binary: {
            const std::string &op = sig[binary[pick(binary.size())]].name;
            Expr lhs = build(level + 1);
            Expr rhs = build(level + 1);
            return Expr::apply(op, std::move(lhs), std::move(rhs));
        }
        case Choice::leaf:
            break;
        }
        return Expr::var(static_cast<int>(pick(static_cast<std::size_t>(num_variables))));
    }
};

bool mentions(const Expr &e, int variable)
{
    if (e.kind == Expr::Kind::variable)
        return e.variable == variable;
    return std::any_of(e.args.begin(), e.args.end(), [&](const Expr &a) { return mentions(a, variable); });
}

void renumber(Expr &e, std::vector<int> &mapping, int &next)
{
    if (e.kind == Expr::Kind::variable) {
        if (mapping[e.variable] < 0)
            mapping[e.variable] = next++;
        e.variable = mapping[e.variable];
        return;
    }
    for (Expr &a : e.args)
        renumber(a, mapping, next);
}

int max_variable(const Expr &e)
{
    if (e.kind == Expr::Kind::variable)
        return e.variable;
    int m = -1;
    for (const Expr &a : e.args)
        m = std::max(m, max_variable(a));
    return m;
}

void check_expr(const Expr &e, const Signature &sig, int num_variables)
{
    switch (e.kind) {
    case Expr::Kind::variable:
        if (e.variable < 0 || e.variable >= num_variables)
            throw FormulaError("variable x" + std::to_string(e.variable) + " out of range");
        return;
    case Expr::Kind::unary:
    case Expr::Kind::binary: {
        const int arity = e.kind == Expr::Kind::unary ? 1 : 2;
        if (static_cast<int>(e.args.size()) != arity)
            throw FormulaError("node '" + e.op + "' has the wrong number of children");
        const auto idx = sig.find(e.op);
        if (!idx || !sig[*idx].is_function(arity))
            throw FormulaError("formula uses '" + e.op + "', which is not a function of arity "
                               + std::to_string(arity) + " in the signature");
        for (const Expr &a : e.args)
            check_expr(a, sig, num_variables);
        return;
    }
    }
}

// Post-order program over a model's tables.
struct Program {
    struct Step {
        Expr::Kind kind;
        int variable;
        const int *table;
    };
    std::vector<Step> steps;

    void compile(const Expr &e, const Model &m)
    {
        if (e.kind == Expr::Kind::variable) {
            steps.push_back({e.kind, e.variable, nullptr});
            return;
        }
        for (const Expr &a : e.args)
            compile(a, m);
        const auto idx = m.signature().find(e.op);
        steps.push_back({e.kind, 0, m.table(*idx).data()});
    }

    int run(const int *assignment, int n, std::vector<int> &stack) const
    {
        stack.clear();
        for (const Step &s : steps) {
            switch (s.kind) {
            case Expr::Kind::variable:
                stack.push_back(assignment[s.variable]);
                break;
            case Expr::Kind::unary:
                stack.back() = s.table[stack.back()];
                break;
            case Expr::Kind::binary: {
                const int rhs = stack.back();
                stack.pop_back();
                stack.back() = s.table[stack.back() * n + rhs];
                break;
            }
            }
        }
        return stack.back();
    }
};

struct CompiledFormula {
    Program left;
    Program right;
    const int *relation = nullptr;
    int n;

    CompiledFormula(const RandomInvariant &inv, const Model &m) : n(m.order())
    {
        check_formula(inv, m.signature());
        left.compile(inv.left, m);
        right.compile(inv.right, m);
        if (inv.relation)
            relation = m.table(*m.signature().find(*inv.relation)).data();
    }

    bool holds(const int *assignment, std::vector<int> &stack) const
    {
        const int l = left.run(assignment, n, stack);
        const int r = right.run(assignment, n, stack);
        return relation ? relation[l * n + r] != 0 : l == r;
    }
};

} // namespace

void check_formula(const RandomInvariant &inv, const Signature &sig)
{
    if (inv.num_variables < 1)
        throw FormulaError("formula must have at least one variable");
    if (inv.base_variable < 0 || inv.base_variable >= inv.num_variables)
        throw FormulaError("base variable out of range");
    if (inv.relation) {
        const auto idx = sig.find(*inv.relation);
        if (!idx || !sig[*idx].is_relation(2))
            throw FormulaError("formula uses '" + *inv.relation + "', which is not a binary relation in the signature");
    }
    check_expr(inv.left, sig, inv.num_variables);
    check_expr(inv.right, sig, inv.num_variables);
}

RandomInvariant generate_formula(const Signature &sig, const SelectionConfig &cfg, Rng &rng)
{
    Generator gen{sig, cfg, rng, {}, {}};
    std::vector<std::size_t> relations;
    for (std::size_t i = 0; i < sig.size(); ++i) {
        if (sig[i].is_function(1))
            gen.unary.push_back(i);
        else if (sig[i].is_function(2))
            gen.binary.push_back(i);
        else if (sig[i].is_relation(2))
            relations.push_back(i);
    }
    if (gen.unary.empty() && gen.binary.empty())
        throw FormulaError("cannot generate formulas: the signature has no unary or binary function");
    if (cfg.max_depth < 1 || cfg.max_vars < 1)
        throw FormulaError("max_depth and max_vars must be at least 1");

    for (int attempt = 0; attempt < max_generation_attempts; ++attempt) {
        gen.num_variables = static_cast<int>(gen.pick(static_cast<std::size_t>(cfg.max_vars))) + 1;

        RandomInvariant inv;
        const std::size_t root = gen.pick(relations.size() + 1);
        if (root > 0)
            inv.relation = sig[relations[root - 1]].name;
        inv.left = gen.build(1);
        inv.right = gen.build(1);
        if (!mentions(inv.left, 0) && !mentions(inv.right, 0))
            continue;

        std::vector<int> mapping(gen.num_variables, -1);
        mapping[0] = 0;
        int next = 1;
        renumber(inv.left, mapping, next);
        renumber(inv.right, mapping, next);
        inv.base_variable = 0;
        inv.num_variables = next;
        return inv;
    }
    throw FormulaError("failed to generate a formula mentioning the base variable");
}

std::vector<RandomInvariant> generate_pool(const Signature &sig, const SelectionConfig &cfg)
{
    const bool usable = std::any_of(sig.entries().begin(), sig.entries().end(),
                                    [](const Symbol &s) { return s.is_function(1) || s.is_function(2); });
    std::vector<RandomInvariant> pool;
    if (!usable)
        return pool;
    Rng rng(cfg.seed);
    pool.reserve(cfg.pool_size);
    for (std::size_t i = 0; i < cfg.pool_size; ++i)
        pool.push_back(generate_formula(sig, cfg, rng));
    return pool;
}

InvariantValue evaluate(const RandomInvariant &inv, const Model &m, Element x)
{
    const CompiledFormula formula(inv, m);
    const int n = m.order();
    const int v = inv.num_variables;
    std::vector<int> assignment(v, 0);
    std::vector<int> stack;
    assignment[inv.base_variable] = x;

    InvariantValue count = 0;
    for (;;) {
        if (formula.holds(assignment.data(), stack))
            ++count;
        int i = v - 1;
        for (; i >= 0; --i) {
            if (i == inv.base_variable)
                continue;
            if (++assignment[i] < n)
                break;
            assignment[i] = 0;
        }
        if (i < 0)
            break;
    }
    return count;
}

std::vector<InvariantValue> evaluate_all(const RandomInvariant &inv, const Model &m)
{
    const CompiledFormula formula(inv, m);
    const int n = m.order();
    const int v = inv.num_variables;
    std::vector<int> assignment(v, 0);
    std::vector<int> stack;
    std::vector<InvariantValue> counts(n, 0);

    for (;;) {
        if (formula.holds(assignment.data(), stack))
            ++counts[assignment[inv.base_variable]];
        int i = v - 1;
        for (; i >= 0; --i) {
            if (++assignment[i] < n)
                break;
            assignment[i] = 0;
        }
        if (i < 0)
            break;
    }
    return counts;
}

std::string to_string(const Expr &e)
{
    switch (e.kind) {
    case Expr::Kind::variable:
        return "x" + std::to_string(e.variable);
    case Expr::Kind::unary:
        return e.op + "(" + to_string(e.args[0]) + ")";
    case Expr::Kind::binary:
        return e.op + "(" + to_string(e.args[0]) + "," + to_string(e.args[1]) + ")";
    }
    return {};
}

std::string to_string(const RandomInvariant &inv)
{
    return inv.relation.value_or("=") + "(" + to_string(inv.left) + "," + to_string(inv.right) + ")";
}

namespace {

class FormulaParser {
public:
    FormulaParser(std::string_view text, const Signature &sig) : text_(text), sig_(sig) {}

    RandomInvariant parse(int base_variable)
    {
        RandomInvariant inv;
        const std::string head = name();
        if (head != "=") {
            const auto idx = sig_.find(head);
            if (!idx || !sig_[*idx].is_relation(2))
                fail("'" + head + "' is neither '=' nor a binary relation");
            inv.relation = head;
        }
        expect('(');
        inv.left = term();
        expect(',');
        inv.right = term();
        expect(')');
        skip_space();
        if (pos_ != text_.size())
            fail("trailing characters");

        inv.base_variable = base_variable;
        inv.num_variables = std::max({max_variable(inv.left), max_variable(inv.right), base_variable}) + 1;
        check_formula(inv, sig_);
        if (!mentions(inv.left, base_variable) && !mentions(inv.right, base_variable))
            fail("formula does not mention the base variable");
        return inv;
    }

private:
    std::string_view text_;
    const Signature &sig_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string &message) const
    {
        throw FormulaError("formula '" + std::string(text_) + "' at offset " + std::to_string(pos_) + ": " + message);
    }

    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    char peek()
    {
        skip_space();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    void expect(char c)
    {
        if (peek() != c)
            fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    std::string name()
    {
        skip_space();
        const std::size_t begin = pos_;
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ',')
                break;
            ++pos_;
        }
        if (pos_ == begin)
            fail("expected a name");
        return std::string(text_.substr(begin, pos_ - begin));
    }

    static std::optional<int> variable_index(const std::string &token)
    {
        if (token.size() < 2 || token[0] != 'x')
            return std::nullopt;
        int v = 0;
        for (std::size_t i = 1; i < token.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(token[i])) || i > 6)
                return std::nullopt;
            v = v * 10 + (token[i] - '0');
        }
        return v;
    }

    Expr term()
    {
        const std::string token = name();
        if (peek() != '(') {
            const auto v = variable_index(token);
            if (!v)
                fail("'" + token + "' is not a variable");
            return Expr::var(*v);
        }
        expect('(');
        Expr first = term();
        if (peek() == ',') {
            ++pos_;
            Expr second = term();
            expect(')');
            return Expr::apply(token, std::move(first), std::move(second));
        }
        expect(')');
        return Expr::apply(token, std::move(first));
    }
};

} // namespace

RandomInvariant parse_formula(std::string_view text, const Signature &sig, int base_variable)
{
    return FormulaParser(text, sig).parse(base_variable);
}

} // namespace isoblock
