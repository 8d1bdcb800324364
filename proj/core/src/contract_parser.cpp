#include "rcps/contract_parser.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>

namespace rcps
{
    ParseError::ParseError(int line, int column, const std::string& message)
        : ContractError(std::to_string(line) + ":" + std::to_string(column) + ": " + message), line_(line),
          column_(column)
    {
    }

    namespace
    {
        enum class Tok
        {
            ident,
            number,
            punct,
            end
        };

        struct Token
        {
            Tok kind = Tok::end;
            std::string text;
            double number = 0.0;
            int line = 1;
            int col = 1;
        };

        class Lexer
        {
        public:
            explicit Lexer(std::string_view src) : src_(src) {}

            std::vector<Token> run()
            {
                std::vector<Token> out;
                for (;;)
                {
                    skip_space();
                    Token t;
                    t.line = line_;
                    t.col = col_;
                    if (pos_ >= src_.size())
                    {
                        out.push_back(t);
                        return out;
                    }
                    const char c = src_[pos_];
                    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
                    {
                        t.kind = Tok::ident;
                        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                                      src_[pos_] == '_' || src_[pos_] == '.'))
                        {
                            t.text += advance();
                        }
                    }
                    else if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.')
                    {
                        t.kind = Tok::number;
                        t.text += advance();
                        while (pos_ < src_.size())
                        {
                            const char d = src_[pos_];
                            const bool exp_sign = (d == '-' || d == '+') && !t.text.empty() &&
                                                  (t.text.back() == 'e' || t.text.back() == 'E');
                            if (std::isdigit(static_cast<unsigned char>(d)) || d == '.' || d == 'e' || d == 'E' ||
                                exp_sign)
                            {
                                t.text += advance();
                            }
                            else
                            {
                                break;
                            }
                        }
                        const char* first = t.text.data();
                        const char* last = first + t.text.size();
                        if (*first == '+')
                        {
                            ++first;
                        }
                        auto [ptr, ec] = std::from_chars(first, last, t.number);
                        if (ec != std::errc{} || ptr != last)
                        {
                            throw ParseError(t.line, t.col, "malformed number '" + t.text + "'");
                        }
                    }
                    else if (c == '{' || c == '}' || c == '[' || c == ']' || c == ',' || c == ':' || c == '|')
                    {
                        t.kind = Tok::punct;
                        t.text = std::string(1, advance());
                    }
                    else
                    {
                        throw ParseError(line_, col_, std::string("unexpected character '") + c + "'");
                    }
                    out.push_back(std::move(t));
                }
            }

        private:
            char advance()
            {
                const char c = src_[pos_++];
                if (c == '\n')
                {
                    ++line_;
                    col_ = 1;
                }
                else
                {
                    ++col_;
                }
                return c;
            }

            void skip_space()
            {
                while (pos_ < src_.size())
                {
                    const char c = src_[pos_];
                    if (c == '#')
                    {
                        while (pos_ < src_.size() && src_[pos_] != '\n')
                        {
                            advance();
                        }
                    }
                    else if (std::isspace(static_cast<unsigned char>(c)))
                    {
                        advance();
                    }
                    else
                    {
                        break;
                    }
                }
            }

            std::string_view src_;
            std::size_t pos_ = 0;
            int line_ = 1;
            int col_ = 1;
        };

        class Parser
        {
        public:
            explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

            std::vector<Contract> contracts()
            {
                std::vector<Contract> out;
                while (peek().kind != Tok::end)
                {
                    out.push_back(contract());
                }
                return out;
            }

        private:
            const Token& peek() const { return toks_[pos_]; }
            const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

            [[noreturn]] void fail(const Token& t, const std::string& msg) const
            {
                throw ParseError(t.line, t.col, msg);
            }

            static std::string describe(const Token& t)
            {
                return t.kind == Tok::end ? std::string("end of input") : "'" + t.text + "'";
            }

            void expect_word(const char* word)
            {
                const Token& t = next();
                if (t.kind != Tok::ident || t.text != word)
                {
                    fail(t, std::string("expected '") + word + "', got " + describe(t));
                }
            }

            void expect_punct(char p)
            {
                const Token& t = next();
                if (t.kind != Tok::punct || t.text[0] != p)
                {
                    fail(t, std::string("expected '") + p + "', got " + describe(t));
                }
            }

            bool at_punct(char p) const { return peek().kind == Tok::punct && peek().text[0] == p; }

            std::string ident()
            {
                const Token& t = next();
                if (t.kind != Tok::ident)
                {
                    fail(t, "expected identifier, got " + describe(t));
                }
                return t.text;
            }

            double number()
            {
                const Token& t = next();
                if (t.kind != Tok::number)
                {
                    fail(t, "expected number, got " + describe(t));
                }
                return t.number;
            }

            Interval interval()
            {
                expect_punct('[');
                Interval iv;
                iv.lo = number();
                expect_punct(',');
                iv.hi = number();
                expect_punct(']');
                return iv;
            }

            PortDomain domain()
            {
                const Token& t = next();
                if (t.kind == Tok::ident)
                {
                    if (t.text == "real")
                    {
                        return PortDomain::real;
                    }
                    if (t.text == "integer")
                    {
                        return PortDomain::integer;
                    }
                    if (t.text == "boolean")
                    {
                        return PortDomain::boolean;
                    }
                }
                fail(t, "expected port domain (real, integer, boolean), got " + describe(t));
            }

            Guarantee guarantee(const Token& kw)
            {
                const Token& kind = next();
                if (kind.kind != Tok::ident)
                {
                    fail(kind, "empty guarantee: expected timing, bound, member or envelope, got " + describe(kind));
                }
                if (kind.text == "timing")
                {
                    TimingGuarantee g;
                    expect_word("every");
                    g.period_ms = number();
                    expect_word("ms");
                    expect_word("within");
                    g.deadline_ms = number();
                    expect_word("ms");
                    return g;
                }
                if (kind.text == "bound")
                {
                    BoundGuarantee g;
                    g.port = ident();
                    expect_word("in");
                    const Interval iv = interval();
                    g.lo = iv.lo;
                    g.hi = iv.hi;
                    return g;
                }
                if (kind.text == "member")
                {
                    SetMembershipGuarantee g;
                    g.port = ident();
                    expect_word("in");
                    g.intervals.push_back(interval());
                    while (at_punct('|'))
                    {
                        next();
                        g.intervals.push_back(interval());
                    }
                    return g;
                }
                if (kind.text == "envelope")
                {
                    EnvelopeGuarantee g;
                    g.port = ident();
                    expect_word("rate");
                    g.k1 = number();
                    expect_word("init");
                    g.k2 = number();
                    expect_word("tol");
                    g.rel_tol = number();
                    return g;
                }
                (void)kw;
                fail(kind, "unknown guarantee kind '" + kind.text + "'");
            }

            Contract contract()
            {
                expect_word("contract");
                Contract c;
                c.id = ident();
                const Token& open = peek();
                expect_punct('{');
                bool have_guarantee = false;
                while (!at_punct('}'))
                {
                    const Token& t = next();
                    if (t.kind != Tok::ident)
                    {
                        fail(t, "expected contract item, got " + describe(t));
                    }
                    if (t.text == "input" || t.text == "output")
                    {
                        PortDecl p;
                        p.direction = t.text == "input" ? Direction::in : Direction::out;
                        p.name = ident();
                        expect_punct(':');
                        p.domain = domain();
                        (p.direction == Direction::in ? c.inputs : c.outputs).push_back(p);
                    }
                    else if (t.text == "assume")
                    {
                        Assumption a;
                        a.port = ident();
                        expect_word("in");
                        a.range = interval();
                        c.assumptions.push_back(a);
                    }
                    else if (t.text == "guarantee")
                    {
                        if (have_guarantee)
                        {
                            fail(t, "contract " + c.id + " has more than one guarantee");
                        }
                        c.guarantee = guarantee(t);
                        have_guarantee = true;
                    }
                    else
                    {
                        fail(t, "unknown contract item '" + t.text + "'");
                    }
                }
                expect_punct('}');
                if (!have_guarantee)
                {
                    fail(open, "contract " + c.id + " has no guarantee");
                }
                return c;
            }

            std::vector<Token> toks_;
            std::size_t pos_ = 0;
        };

        std::string num(double v)
        {
            char buf[64];
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
            return std::string(buf, ptr);
        }

        std::string interval_text(const Interval& iv) { return "[" + num(iv.lo) + ", " + num(iv.hi) + "]"; }
    } // namespace

    std::vector<Contract> parse_contracts(std::string_view text)
    {
        return Parser(Lexer(text).run()).contracts();
    }

    Contract parse_contract(std::string_view text)
    {
        auto all = parse_contracts(text);
        if (all.size() != 1)
        {
            throw ParseError(1, 1, "expected exactly one contract, found " + std::to_string(all.size()));
        }
        return std::move(all.front());
    }

    std::string print_contract(const Contract& c)
    {
        std::string out = "contract " + c.id + " {\n";
        for (const auto& p : c.inputs)
        {
            out += "  input " + p.name + " : " + domain_name(p.domain) + "\n";
        }
        for (const auto& p : c.outputs)
        {
            out += "  output " + p.name + " : " + domain_name(p.domain) + "\n";
        }
        for (const auto& a : c.assumptions)
        {
            out += "  assume " + a.port + " in " + interval_text(a.range) + "\n";
        }
        out += "  guarantee ";
        std::visit(
            [&](const auto& g) {
                using G = std::decay_t<decltype(g)>;
                if constexpr (std::is_same_v<G, TimingGuarantee>)
                {
                    out += "timing every " + num(g.period_ms) + " ms within " + num(g.deadline_ms) + " ms";
                }
                else if constexpr (std::is_same_v<G, BoundGuarantee>)
                {
                    out += "bound " + g.port + " in " + interval_text(Interval{g.lo, g.hi});
                }
                else if constexpr (std::is_same_v<G, SetMembershipGuarantee>)
                {
                    out += "member " + g.port + " in ";
                    for (std::size_t i = 0; i < g.intervals.size(); ++i)
                    {
                        out += (i ? " | " : "") + interval_text(g.intervals[i]);
                    }
                }
                else
                {
                    out += "envelope " + g.port + " rate " + num(g.k1) + " init " + num(g.k2) + " tol " +
                           num(g.rel_tol);
                }
            },
            c.guarantee);
        out += "\n}\n";
        return out;
    }
} // namespace rcps
