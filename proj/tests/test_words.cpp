#include "doctest.h"

#include <map>
#include <random>
#include <set>

#include "qcspec/generators.hpp"
#include "qcspec/presets.hpp"
#include "qcspec/words.hpp"

using namespace qcs;

namespace {

Window golden(Index first, Index last, double phi = 0.0) {
    return sturmian_window(sturmian_params({1}, phi, std::max(std::abs(first), std::abs(last))), first, last);
}

std::map<std::string, Index> brute_factors(const std::string& s, int n) {
    std::map<std::string, Index> out;
    for (std::size_t i = 0; i + n <= s.size(); ++i) ++out[s.substr(i, n)];
    return out;
}

std::string random_binary(std::mt19937_64& rng, int len) {
    std::string s;
    for (int i = 0; i < len; ++i) s += (rng() & 1) ? '1' : '0';
    return s;
}

}  // namespace

TEST_CASE("alphabet and word round trip") {
    const Alphabet a({"a", "b", "c"});
    CHECK(a.index_of("b") == 1);
    CHECK_THROWS_AS(a.index_of("z"), InvalidArgument);
    CHECK(format_word(parse_word("cab", a), a) == "cab");
    CHECK_THROWS_AS(parse_word("cax", a), InvalidArgument);
    const Window w = Window::from_string("0110", 5);
    CHECK(w.at(5) == 0);
    CHECK(w.at(6) == 1);
    CHECK_THROWS_AS(w.at(9), InvalidArgument);
    CHECK(w.slice(6, 8).to_string() == "11");
    CHECK(Alphabet::numeric_from(4, 1).labels() == std::vector<std::string>{"1", "2", "3", "4"});
}

TEST_CASE("factor counts agree with a substring census") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const std::string s = random_binary(rng, 200);
        const Window w = Window::from_string(s, Alphabet::numeric(2));
        for (int n : {1, 3, 7}) {
            const auto got = factors(w, n);
            const auto want = brute_factors(s, n);
            REQUIRE(got.size() == want.size());
            for (const auto& f : got) {
                const auto key = format_word(f.word, w.alphabet);
                CHECK(want.at(key) == f.count);
                CHECK(s.substr(static_cast<std::size_t>(f.first_position), n) == key);
            }
        }
    }
    CHECK_THROWS_AS(factors(Window::from_string("0101"), 2), WindowTooShort);
}

TEST_CASE("complexity of Sturmian, constant and periodic windows") {
    const auto prof = complexity_profile(golden(0, 4096), 60);
    for (int n = 1; n <= 60; ++n) CHECK(prof.p(n) == n + 1);
    CHECK(prof.aperiodic);
    CHECK_FALSE(prof.period.has_value());

    const auto flat = complexity_profile(Window::from_string(std::string(500, '1')), 20);
    for (int n = 1; n <= 20; ++n) CHECK(flat.p(n) == 1);
    REQUIRE(flat.period.has_value());
    CHECK(*flat.period == 1);

    std::string per;
    while (per.size() < 1200) per += "00101";
    const auto pp = complexity_profile(Window::from_string(per), 30);
    REQUIRE(pp.period.has_value());
    CHECK(*pp.period == 5);
    CHECK(pp.p(10) == 5);
}

TEST_CASE("Rauzy graph and special factors of a Sturmian window") {
    const Window w = golden(0, 3000);
    for (int n : {1, 4, 9}) {
        const auto g = rauzy_graph(w, n);
        CHECK(g.vertices.size() == static_cast<std::size_t>(n + 1));
        CHECK(g.edges.size() == static_cast<std::size_t>(n + 2));
        CHECK(g.strongly_connected);
        CHECK_FALSE(g.is_simple_cycle());
        const auto sp = special_factors(w, n);
        CHECK(sp.right_special_count == 1);
        CHECK(sp.left_special_count == 1);
    }
    std::string per;
    while (per.size() < 400) per += "011";
    CHECK(rauzy_graph(Window::from_string(per), 3).is_simple_cycle());
}

TEST_CASE("maximal palindromes match a direct scan") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const std::string s = random_binary(rng, 120);
        const auto got = palindrome_scan(Window::from_string(s, Alphabet::numeric(2)), 2);
        std::set<std::pair<Index, Index>> want;
        const int n = static_cast<int>(s.size());
        for (int c2 = 0; c2 < 2 * n - 1; ++c2) {
            int l = c2 / 2, r = (c2 + 1) / 2;
            if (s[l] != s[r]) continue;
            while (l > 0 && r + 1 < n && s[l - 1] == s[r + 1]) { --l; ++r; }
            if (r - l + 1 >= 2) want.insert({l, r - l + 1});
        }
        std::set<std::pair<Index, Index>> have;
        for (const auto& p : got) have.insert({p.start, p.length});
        CHECK(have == want);
    }
}

TEST_CASE("powers and the index of the golden subshift") {
    const Window w = Window::from_string("1101010100");
    const auto r = index_of(parse_word("10", w.alphabet), w);
    CHECK(r.occurs);
    CHECK(r.index == Rational(8, 2));  // 10101010 starting at 1
    CHECK(r.position == 1);
    CHECK_FALSE(index_of(parse_word("00", w.alphabet), Window::from_string("0101")).occurs);
    // the golden Sturmian index is 2 + golden ratio; windows give lower bounds
    const auto s = subshift_index(golden(0, 5000), 200);
    CHECK(s.index.value() > 3.3);
    CHECK(s.index.value() <= 2 + (1 + std::sqrt(5.0)) / 2 + 1e-12);
}

TEST_CASE("recurrence and Boshernitzan quantity") {
    const Window w = golden(0, 2000);
    const auto r = recurrence_report(w, parse_word("11", w.alphabet));
    for (std::size_t i = 0; i < r.gaps.size(); ++i) CHECK(r.gaps[i] == r.positions[i + 1] - r.positions[i]);
    // gaps of a factor in a Sturmian sequence take at most two values
    std::set<Index> distinct(r.gaps.begin(), r.gaps.end());
    CHECK(distinct.size() <= 2);
    CHECK_THROWS_AS(recurrence_report(Window::from_string("0001"), parse_word("1", Alphabet::numeric(2))),
                    TooFewOccurrences);
    for (int n : {5, 20, 80}) CHECK(boshernitzan_quantity(w, n) > 0.3);
}

TEST_CASE("empirical frequencies sum to one") {
    const Window w = golden(0, 1000);
    double s = 0;
    for (const auto& [word, f] : empirical_frequencies(w, 4)) s += f;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    // frequency of 1 is 1/golden ratio
    for (const auto& [word, f] : empirical_frequencies(w, 1))
        if (word == Word{1}) CHECK(f == doctest::Approx(2 / (1 + std::sqrt(5.0))).epsilon(2e-3));
}
