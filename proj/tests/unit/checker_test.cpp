#include <gtest/gtest.h>

#include <functional>

#include "generators.hpp"
#include "msadl/checker.hpp"
#include "msadl/parser.hpp"

namespace msadl {
namespace {

// Backtracking matcher for the regex subset used by the generators: literals,
// bracket ranges, groups with alternation, and ?, *, +, {m,n} quantifiers.
class MiniRegex {
public:
    explicit MiniRegex(std::string p) : pat_(std::move(p)) {}

    bool full_match(const std::string& s) const {
        return alt(0, pat_.size(), s, 0, [&](std::size_t j) { return j == s.size(); });
    }

private:
    using Cont = std::function<bool(std::size_t)>;
    std::string pat_;

    std::size_t close_of(std::size_t open) const {
        int depth = 0;
        for (std::size_t i = open; i < pat_.size(); ++i) {
            if (pat_[i] == '(') ++depth;
            if (pat_[i] == ')' && --depth == 0) return i;
        }
        return pat_.size();
    }

    bool alt(std::size_t b, std::size_t e, const std::string& s, std::size_t i, const Cont& k) const {
        int depth = 0;
        std::size_t start = b;
        for (std::size_t p = b; p <= e; ++p) {
            if (p < e && pat_[p] == '(') ++depth;
            if (p < e && pat_[p] == ')') --depth;
            if (p == e || (pat_[p] == '|' && depth == 0)) {
                if (seq(start, p, s, i, k)) return true;
                start = p + 1;
            }
        }
        return false;
    }

    std::size_t atom_end(std::size_t p) const {
        if (pat_[p] == '(') return close_of(p) + 1;
        if (pat_[p] == '[') return pat_.find(']', p) + 1;
        return p + 1;
    }

    bool atom(std::size_t b, std::size_t e, const std::string& s, std::size_t i, const Cont& k) const {
        if (pat_[b] == '(') return alt(b + 1, e - 1, s, i, k);
        if (i >= s.size()) return false;
        char c = s[i];
        bool hit = false;
        if (pat_[b] == '[') {
            for (std::size_t p = b + 1; p + 1 < e; ++p) {
                if (p + 2 < e - 1 && pat_[p + 1] == '-') {
                    hit = hit || (c >= pat_[p] && c <= pat_[p + 2]);
                    p += 2;
                } else {
                    hit = hit || c == pat_[p];
                }
            }
        } else {
            hit = c == pat_[b];
        }
        return hit && k(i + 1);
    }

    bool repeat(std::size_t b, std::size_t e, std::size_t lo, std::size_t hi, const std::string& s, std::size_t i,
                const Cont& k) const {
        if (lo == 0 && k(i)) return true;
        if (hi == 0) return false;
        return atom(b, e, s, i, [&](std::size_t j) {
            if (j == i && lo == 0) return false;
            return repeat(b, e, lo ? lo - 1 : 0, hi == SIZE_MAX ? hi : hi - 1, s, j, k);
        });
    }

    bool seq(std::size_t b, std::size_t e, const std::string& s, std::size_t i, const Cont& k) const {
        if (b == e) return k(i);
        std::size_t ae = atom_end(b);
        std::size_t lo = 1, hi = 1, next = ae;
        if (ae < e) {
            char q = pat_[ae];
            if (q == '?') lo = 0, hi = 1, next = ae + 1;
            else if (q == '*') lo = 0, hi = SIZE_MAX, next = ae + 1;
            else if (q == '+') lo = 1, hi = SIZE_MAX, next = ae + 1;
            else if (q == '{') {
                std::size_t close = pat_.find('}', ae);
                std::string body = pat_.substr(ae + 1, close - ae - 1);
                std::size_t comma = body.find(',');
                lo = std::stoul(body.substr(0, comma));
                hi = comma == std::string::npos ? lo : std::stoul(body.substr(comma + 1));
                next = close + 1;
            }
        }
        return repeat(b, ae, lo, hi, s, i, [&](std::size_t j) { return seq(next, e, s, j, k); });
    }
};

TypeDecl person() {
    ParseResult r = parse_unit("/// @entity { identity = [ SSN, country ] } \n"
                               "type Person { SSN: string, country: string( length(3) ), name: string }\n",
                               View::Jolie);
    return r.unit->types.at(0);
}

ValueTree leaf(Scalar s) { return ValueTree{std::move(s), {}}; }

ValueTree person_value(const std::string& country) {
    ValueTree v;
    v.children["SSN"] = {leaf(std::string("123-45-6789"))};
    v.children["country"] = {leaf(country)};
    v.children["name"] = {leaf(std::string("Ada"))};
    return v;
}

TEST(Checker, PersonAccepted) {
    CheckReport r = check_value(person_value("USA"), person());
    EXPECT_TRUE(r.ok);
    EXPECT_TRUE(r.violations.empty());
}

TEST(Checker, ShortCountryViolatesLength) {
    CheckReport r = check_value(person_value("US"), person());
    EXPECT_FALSE(r.ok);
    ASSERT_EQ(r.violations.size(), 1u);
    EXPECT_EQ(r.violations[0].path, "country");
    EXPECT_EQ(r.violations[0].rule, ViolationRule::RefinementViolated);
}

TEST(Checker, CardinalityAndUnknownNodes) {
    ValueTree v = person_value("USA");
    v.children.erase("name");
    v.children["extra"] = {leaf(std::int64_t{1})};
    v.children["SSN"].push_back(leaf(std::string("x")));
    CheckReport r = check_value(v, person());
    ASSERT_EQ(r.violations.size(), 3u);
    std::map<std::string, ViolationRule> byPath;
    for (const auto& x : r.violations) byPath[x.path] = x.rule;
    EXPECT_EQ(byPath["SSN"], ViolationRule::CardinalityViolated);
    EXPECT_EQ(byPath["name"], ViolationRule::CardinalityViolated);
    EXPECT_EQ(byPath["extra"], ViolationRule::UnknownNode);
}

TEST(Checker, NoNumericCoercion) {
    TypeDecl t{"T", TypeBody{BasicType{NativeType::Double, std::nullopt}, {}}, {}, {}, {}, {}};
    EXPECT_FALSE(check_value(leaf(std::int64_t{1}), t).ok);
    EXPECT_TRUE(check_value(leaf(1.0), t).ok);
    t.body.root.native = NativeType::Int;
    EXPECT_FALSE(check_value(leaf(1.0), t).ok);
    t.body.root.native = NativeType::Char;
    EXPECT_FALSE(check_value(leaf(std::string("a")), t).ok);
    EXPECT_TRUE(check_value(leaf(Char{U'a'}), t).ok);
}

TEST(Checker, NestedPaths) {
    ParseResult r = parse_unit("type T { items[0,*]: void { qty: int(range(1, 5)) } }", View::Jolie);
    const TypeDecl& t = r.unit->types[0];
    ValueTree v;
    ValueTree ok, bad;
    ok.children["qty"] = {leaf(std::int64_t{3})};
    bad.children["qty"] = {leaf(std::int64_t{9})};
    v.children["items"] = {ok, bad};
    CheckReport rep = check_value(v, t);
    ASSERT_EQ(rep.violations.size(), 1u);
    EXPECT_EQ(rep.violations[0].path, "items[1].qty");
}

TEST(Checker, LengthCountsCodePoints) {
    EXPECT_TRUE(check_refinement(Scalar{std::string("\xc3\xa9t\xc3\xa9")}, LengthRefinement{3, 3}));
    EXPECT_FALSE(check_refinement(Scalar{std::string("ab")}, LengthRefinement{3, 3}));
}

TEST(Checker, IncompatibleRefinementThrows) {
    try {
        check_refinement(Scalar{std::int64_t{1}}, LengthRefinement{1, 1});
        FAIL();
    } catch (const DiagnosticError& e) {
        EXPECT_EQ(e.code(), codes::RefinementIncompatible);
    }
}

TEST(Checker, RangeAndEnum) {
    EXPECT_TRUE(check_refinement(Scalar{std::int64_t{1}}, RangeRefinement{1, 2}));
    EXPECT_FALSE(check_refinement(Scalar{std::int64_t{3}}, RangeRefinement{1, 2}));
    EXPECT_TRUE(check_refinement(Scalar{1.5}, RangeRefinement{1, 2}));
    EXPECT_TRUE(check_refinement(Scalar{std::string("b")}, EnumRefinement{{"a", "b"}}));
    EXPECT_FALSE(check_refinement(Scalar{std::string("c")}, EnumRefinement{{"a", "b"}}));
}

TEST(Checker, RegexAgreesWithReferenceMatcher) {
    testing::Gen g(5);
    const std::string alphabet = "abcdxyzAZ09-";
    for (const auto& p : testing::sample_patterns()) {
        MiniRegex oracle(p);
        for (int i = 0; i < 2000; ++i) {
            std::string s;
            if (g.coin(3)) {
                s = testing::sample_pattern_match(g, p);
            } else {
                for (auto n = g.between(0, 12); n > 0; --n) s += alphabet[g.below(alphabet.size())];
            }
            EXPECT_EQ(check_refinement(Scalar{s}, RegexRefinement{p}), oracle.full_match(s)) << p << " / " << s;
        }
    }
    EXPECT_FALSE(check_refinement(Scalar{std::string("abc1")}, RegexRefinement{"[a-z]+"}));
}

TEST(Checker, GeneratedValuesAreAccepted) {
    testing::Gen g(17);
    std::vector<std::string> known;
    for (int i = 0; i < 500; ++i) {
        TypeDecl t = testing::gen_type_decl(g, "T", known);
        ValueTree v = testing::gen_value(g, t.body, {});
        CheckReport r = check_value(v, t);
        EXPECT_TRUE(r.ok) << (r.violations.empty() ? "" : r.violations[0].path + ": " + r.violations[0].detail);
    }
}

TEST(Checker, WideningRefinementIsMonotone) {
    testing::Gen g(23);
    for (int i = 0; i < 1000; ++i) {
        auto lo = static_cast<std::uint64_t>(g.between(0, 4));
        auto hi = lo + static_cast<std::uint64_t>(g.between(0, 4));
        std::string s = g.text(0, 10);
        LengthRefinement narrow{lo, hi};
        LengthRefinement wide{lo ? lo - 1 : 0, hi + 1};
        if (check_refinement(Scalar{s}, narrow)) EXPECT_TRUE(check_refinement(Scalar{s}, wide));
        double a = static_cast<double>(g.between(-50, 50));
        double b = a + static_cast<double>(g.between(0, 30));
        std::int64_t x = g.between(-100, 100);
        if (check_refinement(Scalar{x}, RangeRefinement{a, b}))
            EXPECT_TRUE(check_refinement(Scalar{x}, RangeRefinement{a - 1, b + 1}));
    }
}

TEST(Checker, ViolationsAreDeterministic) {
    ValueTree v = person_value("US");
    v.children["zzz"] = {leaf(true)};
    v.children["aaa"] = {leaf(true)};
    auto a = check_value(v, person()).violations;
    for (int i = 0; i < 5; ++i) EXPECT_EQ(check_value(v, person()).violations, a);
}

}  // namespace
}  // namespace msadl
