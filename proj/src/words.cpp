#include "qcspec/words.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>

namespace qcs {

// ---------------------------------------------------------------------------
// Alphabet / Window

Alphabet::Alphabet(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) throw InvalidArgument("alphabet must be non-empty");
    if (labels_.size() > 256) throw InvalidArgument("alphabet larger than 256 symbols");
    std::set<std::string> seen(labels_.begin(), labels_.end());
    if (seen.size() != labels_.size()) throw InvalidArgument("alphabet labels must be distinct");
}

Alphabet Alphabet::numeric(int m) { return numeric_from(m, 0); }

Alphabet Alphabet::numeric_from(int m, int first) {
    if (m < 1) throw InvalidArgument("alphabet size must be positive");
    std::vector<std::string> labels;
    for (int i = 0; i < m; ++i) labels.push_back(std::to_string(first + i));
    return Alphabet(std::move(labels));
}

Symbol Alphabet::index_of(std::string_view label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
        if (labels_[i] == label) return static_cast<Symbol>(i);
    throw InvalidArgument("symbol '" + std::string(label) + "' not in alphabet");
}

bool Alphabet::single_char_labels() const {
    return std::all_of(labels_.begin(), labels_.end(), [](const auto& l) { return l.size() == 1; });
}

Word parse_word(std::string_view text, const Alphabet& alphabet) {
    Word w;
    w.reserve(text.size());
    for (char c : text) w.push_back(alphabet.index_of(std::string_view(&c, 1)));
    return w;
}

std::string format_word(const Word& w, const Alphabet& alphabet) {
    std::string out;
    const bool compact = alphabet.single_char_labels();
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!compact && i > 0) out += ',';
        out += alphabet.label(w[i]);
    }
    return out;
}

Symbol Window::at(Index n) const {
    if (n < start || n >= end())
        throw InvalidArgument("index " + std::to_string(n) + " outside window [" + std::to_string(start) +
                              ", " + std::to_string(end()) + ")");
    return symbols[static_cast<std::size_t>(n - start)];
}

Window Window::slice(Index first, Index last_exclusive) const {
    if (!covers(first, last_exclusive) || last_exclusive < first)
        throw InvalidArgument("slice outside window");
    Window out{first, {}, alphabet};
    out.symbols.assign(symbols.begin() + (first - start), symbols.begin() + (last_exclusive - start));
    return out;
}

Window Window::from_string(std::string_view text, Index start) {
    std::set<char> distinct(text.begin(), text.end());
    std::vector<std::string> labels;
    for (char c : distinct) labels.emplace_back(1, c);
    if (labels.empty()) labels.emplace_back("0");
    Alphabet a(std::move(labels));
    return from_string(text, a, start);
}

Window Window::from_string(std::string_view text, const Alphabet& alphabet, Index start) {
    return Window{start, parse_word(text, alphabet), alphabet};
}

Window Window::from_integers(const std::vector<long long>& values, Index start) {
    std::set<long long> distinct(values.begin(), values.end());
    std::vector<std::string> labels;
    std::map<long long, Symbol> index;
    for (long long v : distinct) {
        index[v] = static_cast<Symbol>(labels.size());
        labels.push_back(std::to_string(v));
    }
    if (labels.empty()) labels.emplace_back("0");
    Window w{start, {}, Alphabet(std::move(labels))};
    w.symbols.reserve(values.size());
    for (long long v : values) w.symbols.push_back(index[v]);
    return w;
}

// ---------------------------------------------------------------------------
// Suffix order truncated at a maximal length.  Suffixes are sorted by their
// first `depth` symbols, ties broken by position, so the first suffix of every
// group is the earliest occurrence.

namespace {

struct TruncatedSuffixOrder {
    std::vector<Index> order;
    std::vector<int> lcp;  // lcp[k]: common prefix of order[k-1], order[k], capped at depth
};

TruncatedSuffixOrder build_order(const Word& s, int depth) {
    const Index n = static_cast<Index>(s.size());
    TruncatedSuffixOrder t;
    t.order.resize(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) t.order[static_cast<std::size_t>(i)] = i;
    auto prefix_cmp = [&](Index a, Index b) {
        const Index la = std::min<Index>(depth, n - a), lb = std::min<Index>(depth, n - b);
        const Index m = std::min(la, lb);
        for (Index k = 0; k < m; ++k) {
            if (s[a + k] != s[b + k]) return s[a + k] < s[b + k] ? -1 : 1;
        }
        if (la != lb) return la < lb ? -1 : 1;
        return 0;
    };
    std::sort(t.order.begin(), t.order.end(), [&](Index a, Index b) {
        int c = prefix_cmp(a, b);
        return c != 0 ? c < 0 : a < b;
    });
    t.lcp.assign(static_cast<std::size_t>(n), 0);
    for (Index k = 1; k < n; ++k) {
        const Index a = t.order[k - 1], b = t.order[k];
        const Index m = std::min<Index>({depth, n - a, n - b});
        int l = 0;
        while (l < m && s[a + l] == s[b + l]) ++l;
        t.lcp[k] = l;
    }
    return t;
}

/// Walks the groups of equal length-n prefixes.  Calls emit(first_index, count).
template <class Emit>
void for_each_group(const Word& s, const TruncatedSuffixOrder& t, int n, Emit&& emit) {
    const Index total = static_cast<Index>(s.size());
    int run_min = std::numeric_limits<int>::max();
    bool have = false;
    Index first = 0, count = 0;
    for (std::size_t k = 0; k < t.order.size(); ++k) {
        if (k > 0) run_min = std::min(run_min, t.lcp[k]);
        const Index i = t.order[k];
        if (total - i < n) continue;
        if (!have || run_min < n) {
            if (have) emit(first, count);
            have = true;
            first = i;
            count = 0;
        }
        first = std::min(first, i);
        ++count;
        run_min = std::numeric_limits<int>::max();
    }
    if (have) emit(first, count);
}

void require_margin(const Window& w, int n) {
    if (n < 1) throw InvalidArgument("factor length must be >= 1");
    const Index need = 4 * static_cast<Index>(n);
    if (w.size() < need) throw WindowTooShort(w.size(), need);
}

bool saturated_at(Index first_offset, int n, Index total) {
    // the factor's first occurrence must end inside the first three quarters
    return 4 * (first_offset + n) <= 3 * total;
}

}  // namespace

std::vector<FactorCount> factors(const Window& w, int n) {
    require_margin(w, n);
    auto t = build_order(w.symbols, n);
    std::vector<FactorCount> out;
    for_each_group(w.symbols, t, n, [&](Index first, Index count) {
        FactorCount f;
        f.word.assign(w.symbols.begin() + first, w.symbols.begin() + first + n);
        f.first_position = w.start + first;
        f.count = count;
        out.push_back(std::move(f));
    });
    return out;
}

std::vector<std::pair<Word, double>> empirical_frequencies(const Window& w, int n) {
    auto fs = factors(w, n);
    const double denom = static_cast<double>(w.size() - n + 1);
    std::vector<std::pair<Word, double>> out;
    out.reserve(fs.size());
    for (auto& f : fs) out.emplace_back(std::move(f.word), static_cast<double>(f.count) / denom);
    return out;
}

ComplexityProfile complexity_profile(const Window& w, int n_max) {
    require_margin(w, n_max);
    ComplexityProfile prof;
    prof.n_max = n_max;
    auto t = build_order(w.symbols, n_max);
    const Index total = w.size();
    for (int n = 1; n <= n_max; ++n) {
        Index p = 0;
        bool sat = true;
        for_each_group(w.symbols, t, n, [&](Index first, Index) {
            ++p;
            if (!saturated_at(first, n, total)) sat = false;
        });
        prof.values.push_back(p);
        prof.saturated.push_back(sat);
    }
    prof.aperiodic = true;
    for (int n = 1; n <= n_max; ++n) {
        if (prof.p(n) < n + 1) prof.aperiodic = false;
    }
    for (int n = 1; n <= n_max; ++n) {
        if (prof.p(n) <= n) {
            // Hedlund-Morse: p(n0) <= n0 forces eventual periodicity; confirm the cycle.
            if (w.size() >= 4 * static_cast<Index>(n + 1) && rauzy_graph(w, n).is_simple_cycle())
                prof.period = prof.p(n);
            break;
        }
    }
    return prof;
}

std::vector<int> RauzyGraph::out_degrees() const {
    std::vector<int> d(vertices.size(), 0);
    for (const auto& e : edges) ++d[static_cast<std::size_t>(e.from)];
    return d;
}

std::vector<int> RauzyGraph::in_degrees() const {
    std::vector<int> d(vertices.size(), 0);
    for (const auto& e : edges) ++d[static_cast<std::size_t>(e.to)];
    return d;
}

bool RauzyGraph::is_simple_cycle() const {
    if (!strongly_connected) return false;
    auto in = in_degrees(), out = out_degrees();
    for (std::size_t v = 0; v < vertices.size(); ++v)
        if (in[v] != 1 || out[v] != 1) return false;
    return true;
}

namespace {

bool reaches_all(int n_vertices, const std::vector<std::vector<int>>& adj) {
    std::vector<char> seen(static_cast<std::size_t>(n_vertices), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int u : adj[static_cast<std::size_t>(v)]) {
            if (!seen[static_cast<std::size_t>(u)]) {
                seen[static_cast<std::size_t>(u)] = 1;
                ++count;
                stack.push_back(u);
            }
        }
    }
    return count == n_vertices;
}

}  // namespace

RauzyGraph rauzy_graph(const Window& w, int n) {
    require_margin(w, n + 1);
    RauzyGraph g;
    g.n = n;
    auto verts = factors(w, n);
    auto edges = factors(w, n + 1);
    std::map<Word, int> index;
    g.saturated = true;
    for (auto& f : verts) {
        index[f.word] = static_cast<int>(g.vertices.size());
        g.vertices.push_back(f.word);
        if (!saturated_at(f.first_position - w.start, n, w.size())) g.saturated = false;
    }
    std::vector<std::vector<int>> fwd(g.vertices.size()), bwd(g.vertices.size());
    for (auto& f : edges) {
        Word head(f.word.begin(), f.word.end() - 1), tail(f.word.begin() + 1, f.word.end());
        RauzyGraph::Edge e{index.at(head), index.at(tail), f.word};
        fwd[static_cast<std::size_t>(e.from)].push_back(e.to);
        bwd[static_cast<std::size_t>(e.to)].push_back(e.from);
        g.edges.push_back(std::move(e));
        if (!saturated_at(f.first_position - w.start, n + 1, w.size())) g.saturated = false;
    }
    const int nv = static_cast<int>(g.vertices.size());
    g.strongly_connected = nv > 0 && reaches_all(nv, fwd) && reaches_all(nv, bwd);
    return g;
}

SpecialFactorReport special_factors(const Window& w, int n) {
    auto g = rauzy_graph(w, n);
    auto out = g.out_degrees(), in = g.in_degrees();
    SpecialFactorReport r;
    r.n = n;
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        SpecialFactor f{g.vertices[v], out[v], in[v]};
        if (!f.right_special() && !f.left_special()) continue;
        r.right_special_count += f.right_special();
        r.left_special_count += f.left_special();
        r.bispecial_count += f.bispecial();
        r.special.push_back(std::move(f));
    }
    return r;
}

// ---------------------------------------------------------------------------
// Palindromes (Manacher)

std::vector<Palindrome> palindrome_scan(const Window& w, Index min_len) {
    if (min_len < 1) throw InvalidArgument("min_len must be >= 1");
    const Word& s = w.symbols;
    const Index n = w.size();
    std::vector<Index> odd(static_cast<std::size_t>(n)), even(static_cast<std::size_t>(n));
    for (Index i = 0, l = 0, r = -1; i < n; ++i) {
        Index k = (i > r) ? 1 : std::min(odd[l + r - i], r - i + 1);
        while (i - k >= 0 && i + k < n && s[i - k] == s[i + k]) ++k;
        odd[i] = k;
        if (i + k - 1 > r) { l = i - k + 1; r = i + k - 1; }
    }
    for (Index i = 0, l = 0, r = -1; i < n; ++i) {
        Index k = (i > r) ? 0 : std::min(even[l + r - i + 1], r - i + 1);
        while (i - k - 1 >= 0 && i + k < n && s[i - k - 1] == s[i + k]) ++k;
        even[i] = k;
        if (i + k - 1 > r) { l = i - k; r = i + k - 1; }
    }
    std::vector<Palindrome> out;
    auto push = [&](Index first, Index len) {
        if (len < min_len) return;
        out.push_back({w.start + first, len, first == 0 || first + len == n});
    };
    for (Index i = 0; i < n; ++i) {
        if (even[i] > 0) push(i - even[i], 2 * even[i]);
        push(i - odd[i] + 1, 2 * odd[i] - 1);
    }
    return out;
}

std::vector<PalindromeWitness> palindrome_witnesses(const Window& w, Index min_len, double growth_constant) {
    if (growth_constant <= 0) throw InvalidArgument("growth constant must be positive");
    auto pals = palindrome_scan(w, min_len);
    std::sort(pals.begin(), pals.end(), [](const Palindrome& a, const Palindrome& b) {
        const double ca = std::abs(a.center()), cb = std::abs(b.center());
        return ca != cb ? ca < cb : a.length > b.length;
    });
    std::vector<PalindromeWitness> out;
    const double logb = std::log(growth_constant);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : pals) {
        const double c = std::abs(p.center());
        const double lr = c * logb - std::log(static_cast<double>(p.length));
        if (lr < best) {
            best = lr;
            out.push_back({c, p.length, lr});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Powers

namespace {

/// run[j] = number of consecutive positions j, j+1, ... with s[j] == s[j-d].
std::vector<Index> period_runs(const Word& s, Index d) {
    const Index n = static_cast<Index>(s.size());
    std::vector<Index> run(static_cast<std::size_t>(n + 1), 0);
    for (Index j = n - 1; j >= d; --j) run[j] = (s[j] == s[j - d]) ? run[j + 1] + 1 : 0;
    return run;
}

}  // namespace

IndexReport index_of(const Word& word, const Window& w) {
    const Index d = static_cast<Index>(word.size());
    if (d < 1) throw InvalidArgument("index_of: word must be non-empty");
    IndexReport rep;
    rep.index = Rational(0, 1);
    const Index n = w.size();
    if (d > n) return rep;
    auto run = period_runs(w.symbols, d);
    Index best = 0, best_pos = 0;
    for (Index i = 0; i + d <= n; ++i) {
        if (!std::equal(word.begin(), word.end(), w.symbols.begin() + i)) continue;
        const Index len = d + run[i + d];
        if (len > best) { best = len; best_pos = i; }
    }
    if (best == 0) return rep;
    rep.occurs = true;
    rep.index = Rational(best, d);
    rep.position = w.start + best_pos;
    return rep;
}

SubshiftIndexReport subshift_index(const Window& w, int max_period) {
    if (max_period < 1) throw InvalidArgument("max_period must be >= 1");
    SubshiftIndexReport rep;
    rep.index = Rational(0, 1);
    const Index n = w.size();
    for (Index d = 1; d <= max_period && d <= n; ++d) {
        auto run = period_runs(w.symbols, d);
        for (Index i = 0; i + d <= n; ++i) {
            Rational r(d + run[i + d], d);
            if (rep.index < r) {
                rep.index = r;
                rep.position = w.start + i;
                rep.witness.assign(w.symbols.begin() + i, w.symbols.begin() + i + d);
            }
        }
    }
    return rep;
}

RecurrenceReport recurrence_report(const Window& w, const Word& word) {
    if (word.empty()) throw InvalidArgument("recurrence_report: empty word");
    RecurrenceReport rep;
    rep.word = word;
    auto it = w.symbols.begin();
    const auto searcher = std::boyer_moore_horspool_searcher(word.begin(), word.end());
    while (true) {
        auto found = std::search(it, w.symbols.end(), searcher);
        if (found == w.symbols.end()) break;
        rep.positions.push_back(w.start + (found - w.symbols.begin()));
        it = found + 1;
    }
    const Index count = static_cast<Index>(rep.positions.size());
    if (count < 2) throw TooFewOccurrences(count);
    for (std::size_t j = 1; j < rep.positions.size(); ++j) {
        rep.gaps.push_back(rep.positions[j] - rep.positions[j - 1]);
        rep.max_gap = std::max(rep.max_gap, rep.gaps.back());
    }
    rep.max_gap_ratio = static_cast<double>(rep.max_gap) / static_cast<double>(word.size());
    rep.frequency = static_cast<double>(count) / static_cast<double>(w.size() - static_cast<Index>(word.size()) + 1);
    return rep;
}

double boshernitzan_quantity(const Window& w, int n) {
    auto fs = factors(w, n);
    Index min_count = std::numeric_limits<Index>::max();
    for (const auto& f : fs) min_count = std::min(min_count, f.count);
    return static_cast<double>(n) * static_cast<double>(min_count) / static_cast<double>(w.size() - n + 1);
}

}  // namespace qcs
