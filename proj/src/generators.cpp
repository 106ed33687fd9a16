#include "qcspec/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qcs {

double ExactAngle::value() const {
    return ratio(num, den);
}

ExactAngle ExactAngle::from_convergent(const ContinuedFraction& cf) {
    if (cf.depth() < 1) throw InvalidArgument("empty continued fraction");
    const int k = cf.depth();
    return ExactAngle{cf.p(k), cf.q(k), cf.q(k) * cf.q(k)};
}

ExactAngle ExactAngle::from_double(double x) {
    Dyadic d = to_dyadic(x);
    return ExactAngle{d.mantissa, BigInt(1) << d.exponent, 0};
}

// ---------------------------------------------------------------------------
// Exact orbit of a circle rotation.  Positions are numerators over a common
// denominator; cut points live on the same grid.

namespace {

BigInt floor_mod(const BigInt& a, const BigInt& m) {
    BigInt r = a % m;
    if (r < 0) r += m;
    return r;
}

class RotationOrbit {
public:
    RotationOrbit(const ExactAngle& theta, double phi, const std::vector<CutPoint>& cuts) : theta_(theta) {
        if (!(phi >= 0.0 && phi < 1.0)) throw InvalidArgument("phase must lie in [0,1)");
        Dyadic p = to_dyadic(phi);
        int e = p.exponent;
        std::vector<Dyadic> cd;
        for (const auto& c : cuts) {
            cd.push_back(to_dyadic(c.constant));
            e = std::max(e, cd.back().exponent);
            max_k_ = std::max(max_k_, std::abs(c.theta_multiple));
            ks_.push_back(c.theta_multiple);
        }
        const BigInt scale = BigInt(1) << e;
        den_ = theta.den * scale;
        step_ = floor_mod(theta.num * scale, den_);
        phase_ = (p.mantissa << (e - p.exponent)) * theta.den;
        for (std::size_t i = 0; i < cuts.size(); ++i) {
            BigInt c = (cd[i].mantissa << (e - cd[i].exponent)) * theta.den +
                       BigInt(cuts[i].theta_multiple) * theta.num * scale;
            cuts_.push_back(floor_mod(c, den_));
        }
    }

    const BigInt& denominator() const { return den_; }
    const std::vector<BigInt>& cuts() const { return cuts_; }

    /// Calls visit(n, x_n) for first <= n < last, where x_n / den is the
    /// fractional part of n*theta + phi.
    template <class Visit>
    void walk(Index first, Index last, Visit&& visit) const {
        if (last <= first) return;
        const Index max_n = std::max(std::abs(first), std::abs(last - 1));
        BigInt threshold = -1;
        if (theta_.error_bound_den != 0) {
            // true and rational positions differ by < (|n| + |k|) / error_bound_den
            threshold = (BigInt(max_n + max_k_) * den_) / theta_.error_bound_den + 1;
        }
        BigInt x = floor_mod(BigInt(first) * step_ + phase_, den_);
        for (Index n = first; n < last; ++n) {
            if (threshold >= 0) certify(n, x, threshold);
            visit(n, x);
            x += step_;
            if (x >= den_) x -= den_;
        }
    }

private:
    void certify(Index n, const BigInt& x, const BigInt& threshold) const {
        auto close = [&](const BigInt& c, int k) {
            BigInt d = x > c ? BigInt(x - c) : BigInt(c - x);
            BigInt wrap = den_ - d;
            if ((d < wrap ? d : wrap) > threshold) return false;
            // the bound that applies to this pair; n == k compares exactly
            const Index m = n > k ? n - k : k - n;
            if (m == 0) return false;
            return (d < wrap ? d : wrap) <= (BigInt(m) * den_) / theta_.error_bound_den + 1;
        };
        bool bad = close(BigInt(0), 0);
        for (std::size_t i = 0; i < cuts_.size(); ++i) bad = bad || close(cuts_[i], ks_[i]);
        if (bad)
            throw Error("symbol at n = " + std::to_string(n) +
                        " cannot be certified at this convergent depth; deepen the continued fraction");
    }

    ExactAngle theta_;
    BigInt den_, step_, phase_;
    std::vector<BigInt> cuts_;
    std::vector<int> ks_;
    int max_k_ = 0;
};

}  // namespace

// ---------------------------------------------------------------------------

SturmianParams::SturmianParams(ExactAngle angle, std::optional<ContinuedFraction> cf, double phi,
                               EndpointConvention v)
    : angle_(std::move(angle)), cf_(std::move(cf)), phi_(phi), variant_(v) {
    if (!(phi_ >= 0.0 && phi_ < 1.0)) throw InvalidArgument("phi must lie in [0,1)");
    if (!(angle_.num > 0 && angle_.num < angle_.den)) throw InvalidArgument("theta must lie in (0,1)");
}

SturmianParams::SturmianParams(ContinuedFraction cf, double phi, EndpointConvention variant)
    : SturmianParams(ExactAngle::from_convergent(cf), std::optional<ContinuedFraction>(cf), phi, variant) {}

SturmianParams SturmianParams::from_theta(double theta, double phi, EndpointConvention variant) {
    if (!(theta > 0.0 && theta < 1.0)) throw InvalidArgument("theta must lie in (0,1)");
    // Full expansion of the dyadic value, then look for a short rational it
    // agrees with to machine tolerance.
    std::optional<ContinuedFraction> cf;
    for (int depth = 1; depth <= 200; ++depth) {
        try {
            cf = continued_fraction(theta, depth);
        } catch (const RationalTheta&) {
            break;
        }
        const BigInt& q = cf->q(depth);
        if (q > 1000000) break;
        const double approx = ratio(cf->p(depth), q);
        if (std::abs(approx - theta) <= 1e-14) throw RationalTheta(cf->p(depth), q, depth);
    }
    return SturmianParams(ExactAngle::from_double(theta), std::nullopt, phi, variant);
}

Window sturmian_window(const SturmianParams& params, Index first, Index last) {
    if (last < first) throw InvalidArgument("empty range");
    RotationOrbit orbit(params.angle(), params.phi(), {CutPoint{1.0, -1}});
    const BigInt cut = orbit.cuts().front();
    Window w{first, {}, Alphabet::numeric(2)};
    w.symbols.reserve(static_cast<std::size_t>(last - first));
    const bool left = params.variant() == EndpointConvention::LeftClosed;
    orbit.walk(first, last, [&](Index, const BigInt& x) {
        const bool one = left ? (x >= cut) : (x > cut || x == 0);
        w.symbols.push_back(one ? 1 : 0);
    });
    return w;
}

StandardWords standard_words(const ContinuedFraction& cf, int k) {
    if (k < 0 || k > cf.depth()) throw InvalidArgument("standard_words: k out of range");
    StandardWords sw;
    sw.words.push_back(Word{0});
    if (k >= 1) {
        Word w1(static_cast<std::size_t>(cf.a(1) - 1), 0);
        w1.push_back(1);
        sw.words.push_back(std::move(w1));
    }
    for (int j = 1; j < k; ++j) {
        Word next;
        const Word& cur = sw.words[static_cast<std::size_t>(j)];
        for (std::int64_t r = 0; r < cf.a(j + 1); ++r) next.insert(next.end(), cur.begin(), cur.end());
        const Word& prev = sw.words[static_cast<std::size_t>(j - 1)];
        next.insert(next.end(), prev.begin(), prev.end());
        sw.words.push_back(std::move(next));
    }
    for (int j = 0; j <= k; ++j)
        if (BigInt(sw.words[static_cast<std::size_t>(j)].size()) != cf.q(j))
            throw Error("standard word length differs from q_k at k = " + std::to_string(j));
    return sw;
}

// ---------------------------------------------------------------------------
// k-partition: forward reachability over (position, parser state).

namespace {

struct ParseState {
    bool leading;  // no w_{k-1} block seen yet: run length lower bound not checked
    int run;       // w_k blocks in the current run
    bool last_prev;
};

}  // namespace

KPartition k_partition(const Window& window, const ContinuedFraction& cf, int k) {
    KPartition out;
    out.level = k;
    const Index n = window.size();
    if (k == 0) {
        for (Index i = 0; i < n; ++i) {
            auto t = window.symbols[static_cast<std::size_t>(i)] == 0 ? KPartition::BlockType::Current
                                                                      : KPartition::BlockType::Previous;
            out.blocks.push_back({t, window.start + i, 1, false});
        }
        return out;
    }
    if (k + 1 > cf.depth()) throw InvalidArgument("k_partition needs a_{k+1}: continued fraction too short");
    auto sw = standard_words(cf, k);
    const Word& cur = sw[k];
    const Word& prev = sw[k - 1];
    const int mult = static_cast<int>(cf.a(k + 1));
    const int max_run = mult + 1;
    const int n_states = 2 * (max_run + 1) * 2;
    auto encode = [&](const ParseState& s) { return ((s.leading ? 1 : 0) * (max_run + 1) + s.run) * 2 + (s.last_prev ? 1 : 0); };
    auto decode = [&](int id) {
        ParseState s;
        s.last_prev = id % 2;
        id /= 2;
        s.run = id % (max_run + 1);
        s.leading = id / (max_run + 1);
        return s;
    };
    const Word& s = window.symbols;
    auto matches_at = [&](Index pos, const Word& w, std::size_t from, std::size_t to) {
        if (pos + static_cast<Index>(to - from) > n) return false;
        return std::equal(w.begin() + static_cast<std::ptrdiff_t>(from), w.begin() + static_cast<std::ptrdiff_t>(to),
                          s.begin() + pos);
    };

    struct Pred {
        Index pos = -1;
        int state = -1;
        KPartition::BlockType type{};
        Index length = 0;
        bool partial = false;
    };

    for (int attempt = 0; attempt < 2; ++attempt) {
        const bool allow_partial_start = attempt == 1;
        std::vector<std::vector<Pred>> pred(static_cast<std::size_t>(n + 1), std::vector<Pred>(static_cast<std::size_t>(n_states)));
        std::vector<std::vector<char>> reach(static_cast<std::size_t>(n + 1), std::vector<char>(static_cast<std::size_t>(n_states), 0));
        auto mark = [&](Index pos, const ParseState& st, Pred p) {
            const int id = encode(st);
            if (!reach[static_cast<std::size_t>(pos)][static_cast<std::size_t>(id)]) {
                reach[static_cast<std::size_t>(pos)][static_cast<std::size_t>(id)] = 1;
                pred[static_cast<std::size_t>(pos)][static_cast<std::size_t>(id)] = p;
            }
        };
        mark(0, {true, 0, false}, Pred{});
        if (allow_partial_start) {
            for (std::size_t len = 1; len < cur.size(); ++len)
                if (matches_at(0, cur, cur.size() - len, cur.size()))
                    mark(static_cast<Index>(len), {true, 1, false},
                         Pred{0, -2, KPartition::BlockType::Current, static_cast<Index>(len), true});
            for (std::size_t len = 1; len < prev.size(); ++len)
                if (matches_at(0, prev, prev.size() - len, prev.size()))
                    mark(static_cast<Index>(len), {false, 0, true},
                         Pred{0, -2, KPartition::BlockType::Previous, static_cast<Index>(len), true});
        }
        Index furthest = 0;
        std::optional<std::pair<Index, int>> done;
        std::optional<Pred> tail;
        for (Index pos = 0; pos <= n && !done; ++pos) {
            for (int id = 0; id < n_states && !done; ++id) {
                if (!reach[static_cast<std::size_t>(pos)][static_cast<std::size_t>(id)]) continue;
                furthest = std::max(furthest, pos);
                const ParseState st = decode(id);
                if (pos == n) {
                    done = {pos, id};
                    break;
                }
                const bool can_cur = st.run + 1 <= max_run;
                const bool can_prev = !st.last_prev && (st.leading ? st.run <= max_run : st.run >= mult);
                if (can_cur && matches_at(pos, cur, 0, cur.size()))
                    mark(pos + static_cast<Index>(cur.size()), {st.leading, st.run + 1, false},
                         Pred{pos, id, KPartition::BlockType::Current, static_cast<Index>(cur.size()), false});
                if (can_prev && matches_at(pos, prev, 0, prev.size()))
                    mark(pos + static_cast<Index>(prev.size()), {false, 0, true},
                         Pred{pos, id, KPartition::BlockType::Previous, static_cast<Index>(prev.size()), false});
                const Index rest = n - pos;
                if (can_cur && rest < static_cast<Index>(cur.size()) && matches_at(pos, cur, 0, static_cast<std::size_t>(rest))) {
                    tail = Pred{pos, id, KPartition::BlockType::Current, rest, true};
                    done = {pos, id};
                } else if (can_prev && rest < static_cast<Index>(prev.size()) &&
                           matches_at(pos, prev, 0, static_cast<std::size_t>(rest))) {
                    tail = Pred{pos, id, KPartition::BlockType::Previous, rest, true};
                    done = {pos, id};
                }
            }
        }
        if (!done) {
            if (attempt == 0) continue;
            throw PartitionFailure(window.start + furthest);
        }
        // Reconstruct.
        std::vector<KPartition::Block> rev;
        if (tail) rev.push_back({tail->type, window.start + tail->pos, tail->length, true});
        Index pos = done->first;
        int id = done->second;
        while (true) {
            const Pred& p = pred[static_cast<std::size_t>(pos)][static_cast<std::size_t>(id)];
            if (p.state == -1) break;
            rev.push_back({p.type, window.start + p.pos, p.length, p.partial});
            if (p.state == -2) break;
            pos = p.pos;
            id = p.state;
        }
        out.blocks.assign(rev.rbegin(), rev.rend());
        // Interior multiplicities.
        int run = 0;
        bool seen_prev = false;
        for (const auto& b : out.blocks) {
            if (b.type == KPartition::BlockType::Current) {
                ++run;
            } else {
                if (seen_prev && !b.partial) out.interior_multiplicities.push_back(run);
                seen_prev = true;
                run = 0;
            }
        }
        return out;
    }
    throw PartitionFailure(window.start);
}

// ---------------------------------------------------------------------------

Substitution::Substitution(Alphabet alphabet, std::vector<Word> images)
    : alphabet_(std::move(alphabet)), images_(std::move(images)) {
    if (static_cast<int>(images_.size()) != alphabet_.size())
        throw InvalidArgument("substitution needs one image per symbol");
    for (const auto& im : images_) {
        if (im.empty()) throw InvalidArgument("substitution images must be non-empty");
        for (Symbol s : im)
            if (s >= alphabet_.size()) throw InvalidArgument("substitution image uses unknown symbol");
    }
}

Substitution Substitution::from_rules(const Alphabet& alphabet, const std::vector<std::string>& images) {
    std::vector<Word> w;
    for (const auto& im : images) w.push_back(parse_word(im, alphabet));
    return Substitution(alphabet, std::move(w));
}

Eigen::MatrixXi Substitution::matrix() const {
    const int m = alphabet_.size();
    Eigen::MatrixXi M = Eigen::MatrixXi::Zero(m, m);
    for (int a = 0; a < m; ++a)
        for (Symbol b : images_[static_cast<std::size_t>(a)]) M(a, b) += 1;
    return M;
}

Word Substitution::apply(const Word& w) const {
    Word out;
    for (Symbol s : w) {
        const Word& im = images_.at(s);
        out.insert(out.end(), im.begin(), im.end());
    }
    return out;
}

Substitution Substitution::power(int m) const {
    if (m < 1) throw InvalidArgument("substitution power must be >= 1");
    std::vector<Word> imgs;
    for (int a = 0; a < alphabet_.size(); ++a) {
        Word w{static_cast<Symbol>(a)};
        for (int i = 0; i < m; ++i) w = apply(w);
        imgs.push_back(std::move(w));
    }
    return Substitution(alphabet_, std::move(imgs));
}

PrimitivityReport primitivity_check(const Substitution& s) {
    const int m = s.alphabet().size();
    Eigen::MatrixXi B = (s.matrix().array() > 0).cast<int>();
    Eigen::MatrixXi P = B;
    const int bound = (m - 1) * (m - 1) + 1;  // Wielandt
    for (int k = 1; k <= bound; ++k) {
        if ((P.array() > 0).all()) return {true, k};
        P = ((P * B).array() > 0).cast<int>();
    }
    return {false, 0};
}

Window substitution_fixed_point(const Substitution& s, Symbol seed, Index length) {
    if (seed >= s.alphabet().size()) throw InvalidArgument("seed not in alphabet");
    if (length < 0) throw InvalidArgument("negative length");
    const int max_power = 2 * s.alphabet().size();
    for (int m = 1; m <= max_power; ++m) {
        Substitution sm = s.power(m);
        const Word& head = sm.image(seed);
        if (head.size() < 2 || head.front() != seed) continue;
        Word out = head;
        std::size_t pos = 1;
        while (static_cast<Index>(out.size()) < length) {
            const Word& im = sm.image(out[pos++]);
            out.insert(out.end(), im.begin(), im.end());
        }
        out.resize(static_cast<std::size_t>(length));
        return Window{0, std::move(out), s.alphabet()};
    }
    throw Error("no power S^m, m <= " + std::to_string(max_power) + ", has a fixed point starting with the seed");
}

// ---------------------------------------------------------------------------

RotationCoding::RotationCoding(ExactAngle theta, double phi, std::vector<CutPoint> cuts, Alphabet labels)
    : theta_(std::move(theta)), phi_(phi), cuts_(std::move(cuts)), labels_(std::move(labels)) {
    if (labels_.size() != static_cast<int>(cuts_.size()) + 1)
        throw InvalidArgument("rotation coding needs one label per interval");
    RotationOrbit orbit(theta_, phi_, cuts_);
    const auto& c = orbit.cuts();
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] == 0 || (i > 0 && !(c[i - 1] < c[i])))
            throw InvalidArgument("rotation coding intervals must be disjoint, non-empty and ordered");
    }
}

Window RotationCoding::window(Index first, Index last) const {
    RotationOrbit orbit(theta_, phi_, cuts_);
    const auto& c = orbit.cuts();
    Window w{first, {}, labels_};
    w.symbols.reserve(static_cast<std::size_t>(std::max<Index>(0, last - first)));
    orbit.walk(first, last, [&](Index, const BigInt& x) {
        auto it = std::upper_bound(c.begin(), c.end(), x);
        w.symbols.push_back(static_cast<Symbol>(it - c.begin()));
    });
    return w;
}

// ---------------------------------------------------------------------------

IntervalExchange::IntervalExchange(std::vector<double> lengths, std::vector<int> tau)
    : lengths_(std::move(lengths)), tau_(std::move(tau)) {
    const int m = static_cast<int>(lengths_.size());
    if (m < 1 || static_cast<int>(tau_.size()) != m) throw InvalidArgument("IET needs m lengths and a permutation of size m");
    double sum = 0;
    for (double l : lengths_) {
        if (!(l > 0)) throw InvalidArgument("IET lengths must be positive");
        sum += l;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw InvalidArgument("IET lengths must sum to 1");
    std::vector<int> check = tau_;
    std::sort(check.begin(), check.end());
    for (int i = 0; i < m; ++i)
        if (check[static_cast<std::size_t>(i)] != i) throw InvalidArgument("tau must be a permutation of 0..m-1");
    std::vector<double> permuted(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) permuted[static_cast<std::size_t>(tau_[static_cast<std::size_t>(i)])] = lengths_[static_cast<std::size_t>(i)];
    mu_.assign(static_cast<std::size_t>(m), 0.0);
    mu_tau_.assign(static_cast<std::size_t>(m), 0.0);
    for (int i = 1; i < m; ++i) {
        mu_[static_cast<std::size_t>(i)] = mu_[static_cast<std::size_t>(i - 1)] + lengths_[static_cast<std::size_t>(i - 1)];
        mu_tau_[static_cast<std::size_t>(i)] = mu_tau_[static_cast<std::size_t>(i - 1)] + permuted[static_cast<std::size_t>(i - 1)];
    }
}

int IntervalExchange::interval_of(double x) const {
    auto it = std::upper_bound(mu_.begin(), mu_.end(), x);
    return std::max(0, static_cast<int>(it - mu_.begin()) - 1);
}

double IntervalExchange::operator()(double x) const {
    const int i = interval_of(x);
    double y = x - mu_[static_cast<std::size_t>(i)] + mu_tau_[static_cast<std::size_t>(tau_[static_cast<std::size_t>(i)])];
    if (y >= 1.0) y -= 1.0;
    if (y < 0.0) y = 0.0;
    return y;
}

IntervalExchange IntervalExchange::inverse() const {
    const int m = size();
    std::vector<double> permuted(static_cast<std::size_t>(m));
    std::vector<int> inv(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        permuted[static_cast<std::size_t>(tau_[static_cast<std::size_t>(i)])] = lengths_[static_cast<std::size_t>(i)];
        inv[static_cast<std::size_t>(tau_[static_cast<std::size_t>(i)])] = i;
    }
    // renormalize against rounding in the partial sums
    const double sum = std::accumulate(permuted.begin(), permuted.end(), 0.0);
    for (auto& l : permuted) l /= sum;
    return IntervalExchange(std::move(permuted), std::move(inv));
}

Window iet_coding(const IntervalExchange& t, double x0, Index first, Index last) {
    if (!(x0 >= 0.0 && x0 < 1.0)) throw InvalidArgument("x0 must lie in [0,1)");
    double x = x0;
    if (first >= 0) {
        for (Index i = 0; i < first; ++i) x = t(x);
    } else {
        IntervalExchange inv = t.inverse();
        for (Index i = 0; i < -first; ++i) x = inv(x);
    }
    Window w{first, {}, Alphabet::numeric_from(t.size(), 1)};
    for (Index n = first; n < last; ++n) {
        w.symbols.push_back(static_cast<Symbol>(t.interval_of(x)));
        x = t(x);
    }
    return w;
}

KeaneReport keane_check(const IntervalExchange& t, int horizon, double tol) {
    KeaneReport rep;
    rep.horizon = horizon;
    const auto& mu = t.left_endpoints();
    const int m = t.size();
    for (int i = 1; i < m; ++i) {
        double x = mu[static_cast<std::size_t>(i)];
        for (int step = 1; step <= horizon; ++step) {
            x = t(x);
            for (int l = 1; l < m; ++l) {
                if (std::abs(x - mu[static_cast<std::size_t>(l)]) <= tol) {
                    rep.collision_free = false;
                    rep.from = i;
                    rep.to = l;
                    rep.steps = step;
                    return rep;
                }
            }
        }
    }
    return rep;
}

EntropyEstimate entropy_estimate(const Window& w, int n_max) {
    auto prof = complexity_profile(w, n_max);
    EntropyEstimate e;
    std::vector<double> logp;
    for (int n = 1; n <= n_max; ++n) {
        logp.push_back(std::log(static_cast<double>(prof.p(n))));
        e.rates.push_back(logp.back() / n);
    }
    e.value = e.rates.back();
    for (int a = 1; a <= n_max; ++a)
        for (int b = 1; a + b <= n_max; ++b)
            if (logp[static_cast<std::size_t>(a + b - 1)] > logp[static_cast<std::size_t>(a - 1)] + logp[static_cast<std::size_t>(b - 1)] + 1e-12)
                e.subadditive = false;
    return e;
}

}  // namespace qcs
