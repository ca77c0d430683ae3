#include "ellgen/localization.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <thread>

#include "ellgen/errors.hpp"

namespace ellgen {

namespace {

constexpr double kPi = 3.14159265358979323846;

void add_error(ValidationReport& r, const std::string& code, const std::string& msg) {
    r.valid = false;
    r.error_codes.push_back(code);
    r.errors.push_back(code + ": " + msg);
}

Rat weighted_sum(const std::vector<RootBundle>& bs, int power) {
    Rat s = 0;
    for (const auto& b : bs) {
        Rat p = 1;
        for (int i = 0; i < power; ++i) p *= b.weight;
        s += p * b.rank;
    }
    return s;
}

// sum over lines of weight * root, as a graded element.
Graded<Rat> weighted_roots(const std::vector<RootBundle>& bs, const FixedComponent& c) {
    Graded<Rat> s(c.table, c.cap);
    for (const auto& b : bs)
        for (const auto& x : b.roots) s += x * Rat(b.weight);
    return s;
}

Graded<Rat> root_squares(const std::vector<RootBundle>& bs, const FixedComponent& c) {
    Graded<Rat> s(c.table, c.cap);
    for (const auto& b : bs)
        for (const auto& x : b.roots) s += x * x;
    return s;
}

void fiber_monomials(int n, int total, Mono& cur, int pos, std::vector<Mono>& out) {
    if (pos == n - 1) {
        cur[pos] = total;
        out.push_back(cur);
        return;
    }
    for (int e = total; e >= 0; --e) {
        cur[pos] = e;
        fiber_monomials(n, total - e, cur, pos + 1, out);
    }
}

Rat mod2(const Rat& x) {
    Rat y = x / 2;
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), y.get_num_mpz_t(), y.get_den_mpz_t());
    return x - 2 * Rat(f);
}

[[noreturn]] void throw_code(const std::string& code, const std::string& msg) {
    if (code == "ZeroWeightNormalBundle") throw ZeroWeightNormalBundle(msg);
    if (code == "MissingTableEntry") throw MissingTableEntry(msg);
    if (code == "InconsistentAnomaly") throw InconsistentAnomaly(msg);
    throw InvalidDataset(msg);
}

int thread_count(int jobs) {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (const char* env = std::getenv("GENUS_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) n = v;
    }
    return std::max(1, std::min(n, jobs));
}

void parallel_for(int jobs, const std::function<void(int)>& body) {
    const int nt = thread_count(jobs);
    if (nt <= 1) {
        for (int i = 0; i < jobs; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errs(jobs);
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t)
        pool.emplace_back([&] {
            for (int i; (i = next++) < jobs;) {
                try {
                    body(i);
                } catch (...) {
                    errs[i] = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

int line_count(const FixedComponent& c) {
    int n = c.k_alpha;
    for (const auto& b : c.normals) n += b.rank;
    for (const auto& b : c.vbundles) n += b.rank;
    return n;
}

int known_order(const Graded<QS>& g) {
    int n = QS::kExact;
    for (const auto& [m, s] : g.terms()) n = std::min(n, s.N8());
    return n;
}

// Fiber integral of one component, sign included, truncated at N8.
Graded<QS> component_contribution(const ActionData& data, const Operator& op, const FixedComponent& c, int N8, int r) {
    int margin = 4 * (line_count(c) + data.k + data.l) + 16;
    for (int attempt = 0;; ++attempt) {
        Integrand f = closed_integrand(op, c, data.k, data.l, N8 + margin, r);
        if (known_order(f) >= N8 || attempt == 3) {
            if (known_order(f) < N8)
                throw LedgerMismatch("integrand on " + c.name + " known only to q^" + q_exponent_label(known_order(f)));
            Graded<QS> g = fiber_integrate(f, c.fiber_indices(), c.base_indices(), c.integration, c.k_alpha,
                                           data.base_table, data.base_cap);
            return g.map([&](const QS& s) { return s.truncated(N8) * WFrac(Rat(c.sign)); });
        }
        margin *= 2;
    }
}

ResultSeries reduce(const Graded<QS>& g) {
    return g.map([](const QS& s) { return s.map([](const WFrac& w) { return w.to_wrat(); }); });
}

std::string canonical_text(const ActionData& data) {
    std::ostringstream os;
    os << "k=" << data.k << ";l=" << data.l << ";cap=" << data.base_cap << ";base=";
    for (const auto& n : data.base_table->names) os << n << ",";
    if (data.declared_anomaly) os << ";n=" << *data.declared_anomaly;
    auto graded = [&](const Graded<Rat>& g) {
        for (const auto& [m, c] : g.terms()) os << mono_to_string(*g.table(), m) << ":" << rat_to_string(c) << " ";
    };
    auto bundles = [&](const char* tag, const std::vector<RootBundle>& bs) {
        for (const auto& b : bs) {
            os << tag << rat_to_string(b.weight) << "x" << b.rank << "[";
            for (const auto& x : b.roots) {
                graded(x);
                os << "|";
            }
            os << "]";
        }
    };
    for (const auto& c : data.components) {
        os << "\n" << c.name << ";ka=" << c.k_alpha << ";sign=" << c.sign << ";gens=";
        for (const auto& n : c.table->names) os << n << ",";
        bundles("T", {c.tangent});
        bundles("N", c.normals);
        bundles("V", c.vbundles);
        os << "I";
        for (const auto& [m, v] : c.integration) {
            for (int e : m) os << e << ".";
            os << "=" << rat_to_string(v) << ",";
        }
    }
    return os.str();
}

}  // namespace

std::string ValidationReport::summary() const {
    std::ostringstream os;
    os << (valid ? "valid" : "invalid");
    for (const auto& e : errors) os << "\n  error: " << e;
    for (const auto& w : warnings) os << "\n  warning: " << w;
    return os.str();
}

bool has_v_data(const ActionData& data) {
    if (data.l > 0) return true;
    for (const auto& c : data.components)
        if (!c.vbundles.empty()) return true;
    return false;
}

ValidationReport validate(const ActionData& data) {
    ValidationReport rep;
    rep.has_v = has_v_data(data);
    if (data.k < 0) add_error(rep, "InvalidDataset", "fiber_half_dim is negative");
    if (data.l < 0) add_error(rep, "InvalidDataset", "v_half_rank is negative");
    if (data.base_cap < 0 || data.base_cap % 2 != 0) add_error(rep, "InvalidDataset", "base_degree_cap must be even and nonnegative");
    if (data.components.empty()) add_error(rep, "InvalidDataset", "no fixed components");
    std::optional<Rat> tangent_parity, v_parity;
    for (const auto& c : data.components) {
        const std::string at = " on component " + c.name;
        if (c.sign != 1 && c.sign != -1) add_error(rep, "InvalidDataset", "sign must be +1 or -1" + at);
        if (c.k_alpha < 0) add_error(rep, "InvalidDataset", "k_alpha is negative" + at);
        if (static_cast<int>(c.tangent.roots.size()) != c.k_alpha)
            add_error(rep, "InvalidDataset", "tangent root count differs from k_alpha" + at);
        int normal_rank = 0;
        for (const auto& b : c.normals) {
            normal_rank += b.rank;
            if (b.weight == 0) add_error(rep, "ZeroWeightNormalBundle", "normal bundle of weight 0" + at);
            if (!rat_is_integer(2 * b.weight)) add_error(rep, "InvalidDataset", "normal weight " + rat_to_string(b.weight) + " is not a half-integer" + at);
            if (b.rank <= 0) add_error(rep, "InvalidDataset", "normal bundle rank must be positive" + at);
        }
        if (normal_rank + c.k_alpha != data.k)
            add_error(rep, "InvalidDataset", "sum of normal ranks plus k_alpha is " + std::to_string(normal_rank + c.k_alpha) +
                                                 ", expected fiber_half_dim " + std::to_string(data.k) + at);
        int v_rank = 0;
        for (const auto& b : c.vbundles) {
            v_rank += b.rank;
            if (!rat_is_integer(2 * b.weight)) add_error(rep, "InvalidDataset", "V weight " + rat_to_string(b.weight) + " is not a half-integer" + at);
            if (b.rank <= 0) add_error(rep, "InvalidDataset", "V bundle rank must be positive" + at);
        }
        if (rep.has_v && v_rank != data.l)
            add_error(rep, "InvalidDataset", "V ranks sum to " + std::to_string(v_rank) + ", expected v_half_rank " + std::to_string(data.l) + at);

        // integration table coverage
        if (c.k_alpha > 0) {
            if (c.n_fiber() == 0) {
                add_error(rep, "MissingTableEntry", "positive k_alpha with no fiber generators" + at);
            } else {
                std::vector<Mono> tops;
                Mono cur(c.n_fiber());
                fiber_monomials(c.n_fiber(), c.k_alpha, cur, 0, tops);
                for (const auto& m : tops)
                    if (!c.integration.count(m)) {
                        GenTable ft;
                        for (int i : c.fiber_indices()) ft.names.push_back(c.table->names[i]), ft.degrees.push_back(2);
                        add_error(rep, "MissingTableEntry", "integration table lacks " + mono_to_string(ft, m) + at);
                        break;
                    }
                for (const auto& [m, v] : c.integration) {
                    int d = 0;
                    for (int e : m) d += e;
                    if (d != c.k_alpha) rep.warnings.push_back("integration entry of fiber degree " + std::to_string(2 * d) + " ignored" + at);
                }
                // orientation: the Euler class of a CP-type component integrates to a positive number
                Graded<Rat> euler = Graded<Rat>::constant(c.table, c.cap, 1);
                for (const auto& y : c.tangent.roots) euler = euler * y;
                try {
                    auto e = fiber_integrate(euler, c.fiber_indices(), c.base_indices(), c.integration, c.k_alpha,
                                             data.base_table, data.base_cap);
                    Rat chi = e.degree_zero();
                    if (chi * c.sign < 0)
                        rep.warnings.push_back("tangent roots integrate to a negative Euler number against the sign" + at);
                } catch (const MissingTableEntry&) {
                }
            }
        }

        Rat ta = weighted_sum(c.normals, 2);
        rep.tangent_anomaly.push_back(ta);
        Rat tp = mod2(weighted_sum(c.normals, 1));
        if (tangent_parity && *tangent_parity != tp)
            rep.warnings.push_back("sum of m d(m) changes parity mod 2 between components (no spin lift of this weight choice)");
        tangent_parity = tp;
        if (rep.has_v) {
            rep.v_anomaly.push_back(weighted_sum(c.vbundles, 2) - ta);
            Rat vp = mod2(weighted_sum(c.vbundles, 1));
            if (v_parity && *v_parity != vp)
                rep.warnings.push_back("sum of n d(n) changes parity mod 2 between components");
            v_parity = vp;
            // mixed u-term of p1: sum n u = sum m x
            Graded<Rat> mixed = weighted_roots(c.vbundles, c) - weighted_roots(c.normals, c);
            if (!mixed.is_zero()) add_error(rep, "InconsistentAnomaly", "sum n_v u_v differs from sum m_g x_g" + at);
            Graded<Rat> plain = root_squares(c.vbundles, c) - root_squares(c.normals, c) - root_squares({c.tangent}, c);
            if (!plain.is_zero()) rep.warnings.push_back("non-equivariant p1(V) and p1(TX) differ" + at);
        }
    }
    const auto& an = rep.has_v ? rep.v_anomaly : rep.tangent_anomaly;
    bool consistent = true;
    for (const auto& a : an)
        if (a != an.front()) consistent = false;
    if (!consistent) rep.warnings.push_back(std::string(rep.has_v ? "V" : "tangent") + " anomaly differs between components");
    if (data.declared_anomaly && !an.empty()) {
        if (!consistent || an.front() != *data.declared_anomaly)
            add_error(rep, "InconsistentAnomaly", "declared anomaly " + std::to_string(*data.declared_anomaly) +
                                                      " does not match the computed " + rat_to_string(an.front()));
    }
    return rep;
}

void require_valid(const ActionData& data) {
    ValidationReport rep = validate(data);
    if (!rep.valid) {
        std::string msg = rep.errors.front();
        msg = msg.substr(msg.find(": ") + 2);
        throw_code(rep.error_codes.front(), msg);
    }
}

int anomaly_index(const ActionData& data) {
    ValidationReport rep = validate(data);
    const auto& an = rep.has_v ? rep.v_anomaly : rep.tangent_anomaly;
    if (an.empty()) throw InconsistentAnomaly("no components");
    for (size_t i = 0; i < an.size(); ++i)
        if (an[i] != an.front())
            throw InconsistentAnomaly("component " + data.components[i].name + " has anomaly " + rat_to_string(an[i]) +
                                      ", component " + data.components[0].name + " has " + rat_to_string(an.front()));
    if (!rat_is_integer(an.front())) throw InconsistentAnomaly("anomaly " + rat_to_string(an.front()) + " is not an integer");
    return static_cast<int>(an.front().get_num().get_si());
}

std::string data_digest(const ActionData& data) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : canonical_text(data)) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

GenusResult equivariant_character(const ActionData& data, const Operator& op, int N8) {
    require_valid(data);
    if (needs_v(op.kind) && !has_v_data(data))
        throw InvalidDataset("operator " + operator_name(op) + " needs V data (v_half_rank and per-component v bundles)");
    GenusResult res;
    res.op = op;
    res.N8 = N8;
    res.w_resolution = data.w_resolution();
    res.ledger = bridge_ledger(op, data.k, data.l);
    res.base_table = data.base_table;
    res.base_cap = data.base_cap;
    res.k = data.k;
    res.l = data.l;
    res.digest = data_digest(data);

    const int n = static_cast<int>(data.components.size());
    std::vector<Graded<QS>> parts(n);
    parallel_for(n, [&](int i) { parts[i] = component_contribution(data, op, data.components[i], N8, res.w_resolution); });

    Graded<QS> total(data.base_table, data.base_cap);
    for (const auto& p : parts) total = total + p;
    res.series = reduce(total);
    for (const auto& p : parts) res.components.push_back(reduce(p));
    return res;
}

Graded<WRat> twisted_dirac_character(const ActionData& data, const std::vector<std::vector<RootBundle>>& twists) {
    require_valid(data);
    if (twists.size() != data.components.size()) throw InvalidDataset("one twisting bundle list per component is required");
    int r = data.w_resolution();
    for (const auto& ts : twists)
        for (const auto& b : ts) r = std::max(r, resolution_for(b.weight));
    Graded<WFrac> total(data.base_table, data.base_cap);
    for (size_t i = 0; i < data.components.size(); ++i) {
        const FixedComponent& c = data.components[i];
        Graded<WFrac> ch(c.table, c.cap);
        for (const auto& b : twists[i])
            ch = ch + chern_character(b, c.table, c.cap, r).map([](const WPoly& p) { return WFrac(p); });
        Graded<WFrac> f = localization_kernel(c, r) * ch;
        total = total + fiber_integrate(f, c.fiber_indices(), c.base_indices(), c.integration, c.k_alpha, data.base_table,
                                        data.base_cap) *
                            WFrac(Rat(c.sign));
    }
    return total.map([](const WFrac& w) { return w.to_wrat(); });
}

RigidityVerdict rigidity_check(const GenusResult& result) {
    RigidityVerdict v;
    std::map<int, std::vector<std::pair<Mono, WRat>>> by_q;
    for (const auto& [m, s] : result.series.terms())
        for (const auto& [n, c] : s.coeffs()) by_q[n].push_back({m, c});
    for (const auto& [n, list] : by_q)
        for (const auto& [m, c] : list) {
            if (!c.is_constant()) {
                v.rigid = false;
                v.witness = Witness{m, n, c};
                return v;
            }
            v.constants.push_back({m, n, c.constant_value()});
        }
    v.rigid = true;
    return v;
}

PoleReport pole_cancellation_check(const std::vector<ResultSeries>& by_component) {
    PoleReport rep;
    if (by_component.empty()) return rep;
    ResultSeries sum = by_component.front();
    for (size_t i = 1; i < by_component.size(); ++i) sum = sum + by_component[i];
    auto den_degree = [](const WRat& w) { return w.den().high() - w.den().low(); };
    for (const auto& part : by_component)
        for (const auto& [m, s] : part.terms())
            for (const auto& [n, c] : s.coeffs()) rep.max_den_degree_before = std::max(rep.max_den_degree_before, den_degree(c));
    std::string first_pole;
    for (const auto& [m, s] : sum.terms())
        for (const auto& [n, c] : s.coeffs()) {
            rep.max_den_degree_after = std::max(rep.max_den_degree_after, den_degree(c));
            if (!c.is_polynomial()) {
                if (first_pole.empty()) first_pole = "pole at q^" + q_exponent_label(n) + ": denominator " + c.den().to_string("u");
                rep.holomorphic = false;
            }
            if (!c.is_constant()) rep.cancelled_entirely = false;
        }
    rep.cancelled_entirely = rep.cancelled_entirely && rep.holomorphic;
    std::ostringstream os;
    os << by_component.size() << " component(s); max denominator degree " << rep.max_den_degree_before << " before, "
       << rep.max_den_degree_after << " after summation";
    if (!first_pole.empty()) os << "; " << first_pole;
    rep.detail = os.str();
    return rep;
}

std::map<Mono, QSeries<WRat>> degree_component(const GenusResult& result, int two_p) {
    if (two_p < 0 || two_p % 2 != 0 || two_p > result.base_cap)
        throw DegreeOutOfRange("degree " + std::to_string(two_p) + " outside 0.." + std::to_string(result.base_cap) + " (even)");
    std::map<Mono, QSeries<WRat>> out;
    for (const auto& [m, s] : result.series.terms())
        if (mono_degree(*result.base_table, m) == two_p) out.emplace(m, s);
    return out;
}

std::map<Mono, cplx> evaluate_numeric(const ActionData& data, const Operator& op, cplx t, cplx tau, double eps) {
    require_valid(data);
    if (needs_v(op.kind) && !has_v_data(data)) throw InvalidDataset("operator " + operator_name(op) + " needs V data");
    if (!(tau.imag() > 0)) throw NonconvergentDomain("Im tau must be positive");
    for (const auto& c : data.components)
        for (const auto& b : c.normals) {
            cplx v = b.weight.get_d() * t;
            double n2 = std::round(v.imag() / tau.imag());
            cplx red = v - n2 * tau;
            double dist = std::abs(red - std::round(red.real()));
            if (dist < 1e-6)
                throw NearPole("m t = " + rat_to_string(b.weight) + " t lies within 1e-6 of a lattice point on component " + c.name);
        }
    Graded<cplx> total(data.base_table, data.base_cap);
    for (const auto& c : data.components) {
        Graded<cplx> f = numeric_integrand(op, c, data.k, data.l, t, tau, eps);
        total = total + fiber_integrate(f, c.fiber_indices(), c.base_indices(), c.integration, c.k_alpha, data.base_table,
                                        data.base_cap) *
                            cplx(c.sign);
    }
    std::map<Mono, cplx> out;
    for (const auto& [m, v] : total.terms()) out.emplace(m, v);
    return out;
}

std::map<Mono, cplx> evaluate_series(const GenusResult& result, cplx t, cplx tau) {
    const cplx I(0, 1);
    const cplx u = std::exp(I * kPi * t / static_cast<double>(result.w_resolution));
    const cplx q8 = std::exp(2.0 * kPi * I * tau / 8.0);
    const cplx pref = result.ledger.value(tau);
    std::map<Mono, cplx> out;
    for (const auto& [m, s] : result.series.terms()) {
        cplx acc = 0;
        for (const auto& [n, c] : s.coeffs()) acc += c.eval(u) * std::pow(q8, n);
        out.emplace(m, pref * acc);
    }
    return out;
}

}  // namespace ellgen
