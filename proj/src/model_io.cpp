#include "isoblock/model_io.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

namespace isoblock {

ParseError::ParseError(const std::string &message, int line, int column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line), column_(column)
{
}

namespace {

constexpr int max_function_arity = 3;
constexpr int max_relation_arity = 2;

struct Position {
    int line = 1;
    int column = 1;
};

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    std::vector<Model> parse()
    {
        std::vector<Model> models;
        SignaturePtr signature;
        for (;;) {
            skip_space();
            if (at_end())
                break;
            const Position start = pos_;
            auto [order, symbols, tables] = parse_clause();
            if (!signature) {
                signature = std::make_shared<const Signature>(std::move(symbols));
            } else if (signature->entries().size() != symbols.size()
                       || !std::equal(symbols.begin(), symbols.end(), signature->entries().begin())) {
                throw ParseError("signature mismatch: model " + std::to_string(models.size() + 1)
                                     + " does not match the signature of the first model",
                                 start.line, start.column);
            }
            try {
                models.emplace_back(order, signature, std::move(tables));
            } catch (const ModelError &e) {
                throw ParseError(e.what(), start.line, start.column);
            }
        }
        return models;
    }

private:
    struct Clause {
        int order;
        std::vector<Symbol> symbols;
        std::vector<std::vector<int>> tables;
    };

    std::string_view text_;
    std::size_t i_ = 0;
    Position pos_;

    bool at_end() const { return i_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[i_]; }

    void advance()
    {
        if (text_[i_] == '\n') {
            ++pos_.line;
            pos_.column = 1;
        } else {
            ++pos_.column;
        }
        ++i_;
    }

    [[noreturn]] void fail(const std::string &message) const { throw ParseError(message, pos_.line, pos_.column); }

    void skip_space()
    {
        while (!at_end()) {
            const char c = peek();
            if (c == '%') {
                while (!at_end() && peek() != '\n')
                    advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    void expect(char c)
    {
        skip_space();
        if (peek() != c) {
            if (at_end())
                fail(std::string("expected '") + c + "' but reached end of input");
            fail(std::string("expected '") + c + "' but found '" + peek() + "'");
        }
        advance();
    }

    bool accept(char c)
    {
        skip_space();
        if (peek() != c)
            return false;
        advance();
        return true;
    }

    static bool is_delimiter(char c)
    {
        return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ',' || c == '['
            || c == ']' || c == '%';
    }

    std::string name()
    {
        skip_space();
        const std::size_t begin = i_;
        while (!at_end() && !is_delimiter(peek()))
            advance();
        if (i_ == begin)
            fail(at_end() ? "expected a name but reached end of input"
                          : std::string("expected a name but found '") + peek() + "'");
        return std::string(text_.substr(begin, i_ - begin));
    }

    int integer()
    {
        skip_space();
        const std::size_t begin = i_;
        long long value = 0;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
            value = value * 10 + (peek() - '0');
            if (value > 0x7fffffff)
                fail("integer too large");
            advance();
        }
        if (i_ == begin)
            fail(at_end() ? "expected an integer but reached end of input"
                          : std::string("expected an integer but found '") + peek() + "'");
        return static_cast<int>(value);
    }

    // The attribute list carries no information we keep.
    void skip_attributes()
    {
        expect('[');
        int depth = 1;
        while (depth > 0) {
            if (at_end())
                fail("unterminated attribute list");
            const char c = peek();
            if (c == '[')
                ++depth;
            else if (c == ']')
                --depth;
            advance();
        }
    }

    Clause parse_clause()
    {
        const Position kw = pos_;
        if (name() != "interpretation")
            throw ParseError("expected 'interpretation'", kw.line, kw.column);
        expect('(');
        Clause clause;
        const Position order_pos = (skip_space(), pos_);
        clause.order = integer();
        if (clause.order < 1)
            throw ParseError("domain size must be at least 1", order_pos.line, order_pos.column);
        expect(',');
        skip_attributes();
        expect(',');
        expect('[');
        if (!accept(']')) {
            do {
                parse_entry(clause);
            } while (accept(','));
            expect(']');
        }
        expect(')');
        expect('.');
        return clause;
    }

    void parse_entry(Clause &clause)
    {
        skip_space();
        const Position kind_pos = pos_;
        const std::string kind_word = name();
        SymbolKind kind;
        if (kind_word == "function")
            kind = SymbolKind::function;
        else if (kind_word == "relation")
            kind = SymbolKind::relation;
        else
            throw ParseError("expected 'function' or 'relation' but found '" + kind_word + "'", kind_pos.line,
                             kind_pos.column);

        expect('(');
        skip_space();
        const Position sym_pos = pos_;
        Symbol sym{name(), kind, 0};
        if (accept('(')) {
            do {
                skip_space();
                if (peek() != '_')
                    fail("expected '_' in argument list of '" + sym.name + "'");
                advance();
                ++sym.arity;
            } while (accept(','));
            expect(')');
        }

        const bool is_function = kind == SymbolKind::function;
        if (is_function && sym.arity > max_function_arity)
            throw ParseError("function '" + sym.name + "' has arity " + std::to_string(sym.arity)
                                 + "; only arities 0 to 3 are supported",
                             sym_pos.line, sym_pos.column);
        if (!is_function && (sym.arity < 1 || sym.arity > max_relation_arity))
            throw ParseError("relation '" + sym.name + "' has arity " + std::to_string(sym.arity)
                                 + "; only arities 1 and 2 are supported",
                             sym_pos.line, sym_pos.column);
        for (const Symbol &other : clause.symbols)
            if (other.name == sym.name)
                throw ParseError("duplicate symbol '" + sym.name + "'", sym_pos.line, sym_pos.column);

        expect(',');
        expect('[');
        const std::size_t expected = table_size(clause.order, sym.arity);
        const int bound = is_function ? clause.order : 2;
        std::vector<int> values;
        values.reserve(expected);
        if (!accept(']')) {
            do {
                skip_space();
                const Position value_pos = pos_;
                const int v = integer();
                if (v >= bound)
                    throw ParseError("value " + std::to_string(v) + " out of range in table for '" + sym.name + "'",
                                     value_pos.line, value_pos.column);
                values.push_back(v);
            } while (accept(','));
            expect(']');
        }
        if (values.size() != expected)
            throw ParseError("table for '" + sym.name + "' has " + std::to_string(values.size())
                                 + " values, expected " + std::to_string(expected),
                             sym_pos.line, sym_pos.column);
        expect(')');

        clause.symbols.push_back(std::move(sym));
        clause.tables.push_back(std::move(values));
    }
};

void write_symbol(const Symbol &sym, std::ostream &out)
{
    out << sym.name;
    if (sym.arity > 0) {
        out << '(';
        for (int i = 0; i < sym.arity; ++i)
            out << (i ? ",_" : "_");
        out << ')';
    }
}

} // namespace

std::vector<Model> parse_models(std::string_view text)
{
    return Parser(text).parse();
}

std::vector<Model> parse_models(std::istream &in)
{
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return parse_models(text);
}

void write_models(std::span<const Model> models, std::ostream &out)
{
    for (std::size_t k = 0; k < models.size(); ++k) {
        const Model &m = models[k];
        const Signature &sig = m.signature();
        if (k > 0)
            out << '\n';
        out << "interpretation( " << m.order() << ", [number=" << (k + 1) << ", seconds=0], [\n";
        for (std::size_t e = 0; e < sig.size(); ++e) {
            const Symbol &sym = sig[e];
            out << "    " << (sym.kind == SymbolKind::function ? "function(" : "relation(");
            write_symbol(sym, out);
            out << ", [";
            const auto table = m.table(e);
            for (std::size_t i = 0; i < table.size(); ++i) {
                if (i)
                    out << ',';
                out << table[i];
            }
            out << "])" << (e + 1 < sig.size() ? ",\n" : "\n");
        }
        out << "]).\n";
    }
    if (!out)
        throw std::runtime_error("failed to write models");
}

std::string format_models(std::span<const Model> models)
{
    std::ostringstream out;
    write_models(models, out);
    return out.str();
}

std::vector<Model> read_model_file(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open '" + path + "' for reading");
    return parse_models(in);
}

void write_model_file(const std::string &path, std::span<const Model> models)
{
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open '" + path + "' for writing");
        write_models(models, out);
        out.close();
        if (!out) {
            std::filesystem::remove(tmp);
            throw std::runtime_error("failed to write '" + path + "'");
        }
    }
    std::filesystem::rename(tmp, path);
}

} // namespace isoblock
