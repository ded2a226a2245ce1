#include "sauv/verify.hpp"

#include "sauv/interpret.hpp"
#include "sauv/liberation.hpp"
#include "sauv/model_io.hpp"
#include "sauv/momentpoly.hpp"
#include "sauv/tower.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

namespace sauv {

namespace {

struct Accumulator {
    std::string suite;
    std::string name;
    double tolerance;
    double worst = 0;
    int cases = 0;
    std::string detail;

    void add(double r)
    {
        if (!(r <= worst)) worst = r;  // NaN propagates as failure
        ++cases;
    }
    Check done() const
    {
        Check c{suite, name, worst, tolerance, cases, false, detail};
        c.pass = detail.empty() && worst <= tolerance;
        return c;
    }
};

// Runs f, turning exceptions into a failed check.
void guarded(std::vector<Check>& out, const std::string& suite, const std::string& name, double tol,
             const std::function<void(Accumulator&)>& f)
{
    Accumulator acc{suite, name, tol, 0, 0, {}};
    try {
        f(acc);
    } catch (const std::exception& e) {
        acc.detail = e.what();
    }
    out.push_back(acc.done());
}

std::string tstr(const Rational& t) { return "t=" + to_string(t); }

Interpretation product_interpretation(const MatModel& m, double t)
{
    Interpretation in = model_interpretation(m);
    in.rho = [&m, t](const Mat& a) { return m.phi(t, a); };
    in.psi = [&m](const Mat& b) { return Mat(m.omega(b) * Mat::Identity(m.n(), m.n())); };
    return in;
}

Mat centered(const MatModel& m, const Mat& b) { return b - m.omega(b) * Mat::Identity(m.n(), m.n()); }

}  // namespace

std::vector<Check> check_model(const MatModel& m, const std::vector<Rational>& times, const Tolerances& tol)
{
    std::vector<Check> out;
    const int n = m.n();
    guarded(out, "model", "state hermitian, trace one", tol.model, [&](Accumulator& a) {
        a.add((m.state() - m.state().adjoint()).norm());
        a.add(std::abs(m.state().trace() - cd(1, 0)));
    });
    guarded(out, "model", "state faithful", tol.model, [&](Accumulator& a) {
        Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m.state() + m.state().adjoint()));
        double lmin = es.eigenvalues().minCoeff();
        a.add(lmin > tol.model ? 0.0 : tol.model - lmin + tol.model);
    });
    guarded(out, "model", "generator annihilates 1", tol.model, [&](Accumulator& a) {
        a.add(apply_superop(m.generator(), Mat::Identity(n, n), n).norm());
    });
    for (const auto& t : times) {
        guarded(out, "model", "phi CP (Choi) " + tstr(t), tol.model, [&](Accumulator& a) {
            CPCheck c = is_cp_unital(m.phi_superop(to_double(t)), n, n, tol.model);
            a.add(std::max(0.0, -c.min_eigenvalue));
        });
        guarded(out, "model", "phi unital " + tstr(t), tol.model, [&](Accumulator& a) {
            CPCheck c = is_cp_unital(m.phi_superop(to_double(t)), n, n, tol.model);
            a.add(c.unital_error);
        });
    }
    return out;
}

std::vector<Check> check_representations(const MatModel& m, const std::vector<Rational>& times, const Tolerances& tol)
{
    std::vector<Check> out;
    for (const auto& t : times) {
        CPTuple tup = tuple_from_model(m, to_double(t));
        auto add_rep = [&](const std::string& label, const std::function<Representation()>& make) {
            RepresentationCheck rc;
            std::string err;
            try {
                rc = check_representation(make(), tup);
            } catch (const std::exception& e) {
                err = e.what();
            }
            auto push = [&](const std::string& what, double r) {
                guarded(out, "representation", label + " " + what + " " + tstr(t), tol.representation,
                        [&](Accumulator& a) {
                            if (!err.empty()) throw std::runtime_error(err);
                            a.add(r);
                        });
            };
            push("GNS state identity", rc.state_error);
            push("V*V = 1", rc.isometry_error);
            push("V* piL V = piR o phi", rc.compression_error);
            push("piR homomorphism", rc.right_hom_error);
            push("piL homomorphism", rc.left_hom_error);
        };
        add_rep("minimal", [&] { return minimal_representation(tup); });
        add_rep("faithful", [&] { return faithful_representation(tup).rep; });
        add_rep("right-augmented", [&] { return right_augmented_representation(tup); });
        guarded(out, "representation", "faithful decomposition " + tstr(t), 0.0, [&](Accumulator& a) {
            FaithfulRepresentation f = faithful_representation(tup);
            a.add(decomposition_faithful(f.rep, f.decomposition) ? 0.0 : 1.0);
        });
    }
    return out;
}

std::vector<Check> check_retractions(const MatModel& m, const std::vector<Rational>& times, int depth, int trials,
                                     std::uint64_t seed, const Tolerances& tol)
{
    std::vector<Check> out;
    std::mt19937_64 rng(seed);
    const int n = m.n();
    for (const auto& t : times) {
        const double td = to_double(t);
        CPTuple tup = tuple_from_model(m, td);
        std::optional<SauvageotProduct> P, F;
        std::string err;
        try {
            P.emplace(SauvageotProduct::minimal(tup, depth));
            F.emplace(SauvageotProduct::faithful(tup, depth));
        } catch (const std::exception& e) {
            err = e.what();
        }
        auto need = [&] {
            if (!err.empty()) throw std::runtime_error(err);
        };
        guarded(out, "retraction", "theta psi_R = id " + tstr(t), tol.retraction, [&](Accumulator& a) {
            need();
            for (int k = 0; k < trials; ++k) {
                Mat b = random_matrix(n, rng);
                a.add((P->theta({P->psi_R(b)}).value - b).norm());
            }
        });
        guarded(out, "retraction", "theta psi_L = phi " + tstr(t), tol.retraction, [&](Accumulator& a) {
            need();
            for (int k = 0; k < trials; ++k) {
                Mat x = random_matrix(n, rng);
                a.add((P->theta({P->psi_L(x)}).value - tup.apply(x)).norm());
            }
        });
        guarded(out, "retraction", "corner H block of psi_L(a) = piR(phi(a)) " + tstr(t), tol.retraction,
                [&](Accumulator& a) {
                    need();
                    for (int k = 0; k < trials; ++k) {
                        Mat x = random_matrix(n, rng);
                        Mat c = P->space().compress_H({P->psi_L(x)});
                        a.add((c - P->representation().piR(tup.apply(x))).norm());
                    }
                });
        guarded(out, "retraction", "theta' psi_L = id (faithful) " + tstr(t), tol.retraction, [&](Accumulator& a) {
            need();
            for (int k = 0; k < trials; ++k) {
                Mat x = random_matrix(n, rng);
                a.add((F->theta_left({F->psi_L(x)}).value - x).norm());
            }
        });
        // Retractions of generic alternating words against the moment functions with rho = phi_t and
        // psi = omega(.) 1; relative error since the entries are unnormalized.
        Interpretation in = product_interpretation(m, td);
        guarded(out, "retraction", "theta vs right moment function, l <= 3 " + tstr(t), tol.retraction,
                [&](Accumulator& a) {
                    need();
                    for (int ell = 1; ell <= std::min(3, depth); ++ell) {
                        std::vector<SpaceLetter> w;
                        for (int i = 0; i <= ell; ++i) {
                            w.push_back(P->psi_R(in.symbol(Alg::B, i)));
                            if (i < ell) w.push_back(P->psi_L(in.symbol(Alg::A, i + 1)));
                        }
                        Mat x = P->theta(w).value;
                        Mat y = interpret(moment_right(AltWord::generic(ell)), in);
                        a.add((x - y).norm() / std::max(1.0, y.norm()));
                    }
                });
        guarded(out, "retraction", "theta' vs left moment function, l <= 3 " + tstr(t), tol.retraction,
                [&](Accumulator& a) {
                    need();
                    for (int ell = 1; ell <= std::min(3, depth); ++ell) {
                        std::vector<SpaceLetter> w;
                        for (int i = 0; i <= ell; ++i) {
                            w.push_back(F->psi_L(in.symbol(Alg::A, i)));
                            if (i < ell) w.push_back(F->psi_R(in.symbol(Alg::B, i + 1)));
                        }
                        Mat x = F->theta_left(w).value;
                        Mat y = interpret(moment_left(LeftWord::generic(ell)), in);
                        a.add((x - y).norm() / std::max(1.0, y.norm()));
                    }
                });
    }
    return out;
}

std::vector<Check> check_liberation(const MatModel& m, const std::vector<Rational>& times, int depth, int trials,
                                    std::uint64_t seed, const Tolerances& tol)
{
    std::vector<Check> out;
    std::mt19937_64 rng(seed + 1);
    const int n = m.n();
    for (const auto& t : times) {
        CPTuple tup = tuple_from_model(m, to_double(t));
        auto run = [&](const std::string& label, bool left, const std::function<SauvageotProduct()>& make) {
            guarded(out, "liberation", label + " " + tstr(t), tol.liberation, [&](Accumulator& a) {
                SauvageotProduct P = make();
                for (int k = 0; k < trials; ++k) {
                    int len = 1 + k % std::min(3, depth);
                    std::vector<Mat> as, bs;
                    for (int i = 0; i < len; ++i) as.push_back(random_matrix(n, rng));
                    for (int i = 0; i < len + (left ? 1 : 0); ++i) bs.push_back(random_matrix(n, rng));
                    SauvageotProduct::ResidualOptions o;
                    o.exact_levels = 1;
                    o.sampled_levels = len < 3 ? 1 : 0;
                    o.seed = seed + static_cast<std::uint64_t>(k);
                    auto r = left ? P.left_liberation_residual(as, bs, o) : P.right_liberation_residual(as, bs, o);
                    a.add(r.max());
                }
            });
        };
        run("right, minimal", false, [&] { return SauvageotProduct::minimal(tup, depth); });
        run("right, H' != 0", false, [&] { return SauvageotProduct::right_augmented(tup, depth); });
        run("left, faithful", true, [&] { return SauvageotProduct::faithful(tup, depth); });
        guarded(out, "liberation", "b = 1 centers to zero " + tstr(t), 0.0, [&](Accumulator& a) {
            SauvageotProduct P = SauvageotProduct::minimal(tup, depth);
            std::vector<Mat> as{random_matrix(n, rng)}, bs{Mat::Identity(n, n)};
            a.add(P.right_liberation_residual(as, bs, {}).max());
        });
        // Negative control: replacing phi_t by phi_2t breaks the covariance of the corner.
        guarded(out, "liberation", "wrong semigroup time is detected " + tstr(t), 0.0, [&](Accumulator& a) {
            SauvageotProduct P = SauvageotProduct::minimal(tup, depth);
            Mat x = random_matrix(n, rng);
            Mat b = centered(m, random_matrix(n, rng));
            Mat C = P.space().compress_H({P.psi_L(x), P.psi_R(b)}) -
                    P.space().compress_H({P.psi_R(m.phi(2 * to_double(t), x)), P.psi_R(b)});
            a.add(C.norm() > 1e-6 ? 0.0 : 1.0);
        });
    }
    return out;
}

std::vector<Check> check_oracle(const MatModel& m, const std::vector<Rational>& times, int max_word_len, int trials,
                                std::uint64_t seed, const Tolerances& tol)
{
    std::vector<Check> out;
    std::mt19937_64 rng(seed + 2);
    const int n = m.n();
    for (const auto& t : times) {
        guarded(out, "oracle", "tower {0,t} vs recursion " + tstr(t), tol.oracle, [&](Accumulator& a) {
            TowerOptions o;
            o.max_word_len = max_word_len;
            DilationTower T(m, {Rational(0), t}, o);
            for (int k = 0; k < trials; ++k) {
                int len = 1 + k % max_word_len;
                std::vector<Rational> ts;
                std::vector<Mat> es;
                for (int i = 0; i < len; ++i) {
                    ts.push_back(rng() % 2 ? t : Rational(0));
                    es.push_back(random_matrix(n, rng));
                }
                Mat x = word_expectation(T, ts, es);
                Mat y = smoment_numeric(NumericPair{ts, es}, m);
                a.add((x - y).norm() / std::max(1.0, y.norm()));
            }
        });
        guarded(out, "oracle", "<<t,0>> = phi_t(a1) a2 " + tstr(t), tol.oracle, [&](Accumulator& a) {
            DilationTower T(m, {Rational(0), t});
            Mat a1 = m.binding("a1"), a2 = m.binding("a2");
            a.add((word_expectation(T, {t, Rational(0)}, {a1, a2}) - m.phi(to_double(t), a1) * a2).norm());
        });
    }
    return out;
}

std::vector<Check> check_tower(const MatModel& m, const Rational& s, const Rational& t, int max_word_len, int trials,
                               std::uint64_t seed, const Tolerances& tol)
{
    std::vector<Check> out;
    std::mt19937_64 rng(seed + 3);
    const int n = m.n();
    const std::string lab = "s=" + to_string(s) + " t=" + to_string(t);
    TowerOptions o;
    o.max_word_len = max_word_len;
    std::optional<DilationTower> T3, T2, Tail;
    std::string err;
    try {
        T3.emplace(m, std::vector<Rational>{0, s, t}, o);
        T2.emplace(m, std::vector<Rational>{0, t}, o);
        Tail.emplace(m, std::vector<Rational>{0, t - s}, o);
    } catch (const std::exception& e) {
        err = e.what();
    }
    auto need = [&] {
        if (!err.empty()) throw std::runtime_error(err);
    };
    auto random_word = [&](int len, const std::vector<Rational>& pool, std::vector<Rational>& ts, std::vector<Mat>& es) {
        ts.clear();
        es.clear();
        for (int i = 0; i < len; ++i) {
            ts.push_back(pool[rng() % pool.size()]);
            es.push_back(random_matrix(n, rng));
        }
    };
    double gram_min = 0;
    guarded(out, "tower", "{0,s,t} vs recursion " + lab, tol.oracle, [&](Accumulator& a) {
        need();
        std::vector<Rational> ts;
        std::vector<Mat> es;
        for (int k = 0; k < trials; ++k) {
            random_word(1 + k % max_word_len, {0, s, t}, ts, es);
            TowerDiagnostics d;
            Mat x = word_expectation(*T3, ts, es, &d);
            gram_min = std::min(gram_min, d.gram_min_eigenvalue);
            Mat y = smoment_numeric(NumericPair{ts, es}, m);
            a.add((x - y).norm() / std::max(1.0, y.norm()));
        }
    });
    guarded(out, "tower", "Gram kernels positive semidefinite " + lab, tol.consistency, [&](Accumulator& a) {
        need();
        a.add(-gram_min);
    });
    guarded(out, "tower", "consistency eps_gamma o f = eps_beta, beta={0,t} " + lab, tol.consistency,
            [&](Accumulator& a) {
                need();
                std::vector<Rational> ts;
                std::vector<Mat> es;
                for (int k = 0; k < trials; ++k) {
                    random_word(1 + k % max_word_len, {0, t}, ts, es);
                    Mat x = T3->retract(ts, es);
                    Mat y = T2->retract(ts, es);
                    a.add((x - y).norm() / std::max(1.0, y.norm()));
                }
            });
    guarded(out, "tower", "tail retraction eps_gamma = phi_s o eps_{0,t-s} " + lab, tol.consistency,
            [&](Accumulator& a) {
                need();
                std::vector<Rational> ts, shifted;
                std::vector<Mat> es;
                for (int k = 0; k < trials; ++k) {
                    random_word(1 + k % max_word_len, {s, t}, ts, es);
                    shifted.clear();
                    for (const auto& x : ts) shifted.push_back(x - s);
                    Mat x = T3->retract(ts, es);
                    Mat y = m.phi(to_double(s), Tail->retract(shifted, es));
                    a.add((x - y).norm() / std::max(1.0, y.norm()));
                }
            });
    guarded(out, "tower", "eps_gamma o iota = id " + lab, tol.consistency, [&](Accumulator& a) {
        need();
        for (int k = 0; k < trials; ++k) {
            Mat x = random_matrix(n, rng);
            a.add((T3->retract({Rational(0)}, {x}) - x).norm());
        }
    });
    return out;
}

std::vector<Check> check_shift(const MatModel& m, int max_word_len, int trials, std::uint64_t seed,
                               const Tolerances& tol)
{
    std::vector<Check> out;
    std::mt19937_64 rng(seed + 4);
    const int n = m.n();
    const std::vector<Rational> pool = {0, make_rational(1, 4), make_rational(1, 2), 1, make_rational(3, 2)};
    const std::vector<Rational> shifts = {make_rational(1, 8), make_rational(1, 3), 1};
    guarded(out, "shift", "S(t + tau) = phi_tau(S(t)), recursion", tol.shift, [&](Accumulator& a) {
        for (int k = 0; k < trials; ++k) {
            int len = 1 + k % 5;
            std::vector<Rational> ts, moved;
            std::vector<Mat> es;
            Rational tau = shifts[rng() % shifts.size()];
            for (int i = 0; i < len; ++i) {
                ts.push_back(pool[rng() % pool.size()]);
                moved.push_back(ts.back() + tau);
                es.push_back(random_matrix(n, rng));
            }
            Mat x = smoment_numeric(NumericPair{moved, es}, m);
            Mat y = m.phi(to_double(tau), smoment_numeric(NumericPair{ts, es}, m));
            a.add((x - y).norm() / std::max(1.0, y.norm()));
        }
    });
    guarded(out, "shift", "E o sigma_tau = phi_tau o E, tower", tol.consistency, [&](Accumulator& a) {
        TowerOptions o;
        o.max_word_len = max_word_len;
        const Rational s = make_rational(1, 2), tau = make_rational(1, 4);
        DilationTower G(m, {0, s}, o), D(m, {0, tau, s + tau}, o);
        for (int k = 0; k < trials; ++k) {
            int len = 1 + k % max_word_len;
            std::vector<Rational> ts, moved;
            std::vector<Mat> es;
            for (int i = 0; i < len; ++i) {
                ts.push_back(rng() % 2 ? s : Rational(0));
                moved.push_back(ts.back() + tau);
                es.push_back(random_matrix(n, rng));
            }
            Mat x = D.retract(moved, es);
            Mat y = m.phi(to_double(tau), G.retract(ts, es));
            a.add((x - y).norm() / std::max(1.0, y.norm()));
        }
    });
    return out;
}

std::vector<Check> check_discontinuity(const MatModel& m, const Rational& t1, const Rational& t2, const Rational& t3,
                                       const Tolerances& tol)
{
    std::vector<Check> out;
    const std::string lab = "(" + to_string(t1) + "," + to_string(t2) + "," + to_string(t3) + ")";
    std::vector<Mat> as;
    for (int i = 1; i <= 5; ++i) as.push_back(m.binding("a" + std::to_string(i)));
    std::vector<Rational> taus;
    for (int k = 1; k <= 8; ++k) taus.push_back(make_rational(1, std::int64_t{1} << k));
    guarded(out, "discontinuity", "gap vs closed form " + lab, tol.discontinuity, [&](Accumulator& a) {
        a.add(discontinuity(as, t1, t2, t3, taus, m, true).mismatch);
    });
    // The family approaches the limit at first order in tau: distances decrease and halve with tau.
    guarded(out, "discontinuity", "tau family decreases to the limit " + lab, 0.0, [&](Accumulator& a) {
        auto r = discontinuity(as, t1, t2, t3, taus, m, true);
        for (std::size_t k = 1; k < r.rows.size(); ++k)
            a.add(std::max(0.0, r.rows[k].distance_to_limit - r.rows[k - 1].distance_to_limit));
    });
    guarded(out, "discontinuity", "tau family first-order rate " + lab, 0.05, [&](Accumulator& a) {
        auto r = discontinuity(as, t1, t2, t3, taus, m, true);
        const auto& last = r.rows.back();
        const auto& prev = r.rows[r.rows.size() - 2];
        a.add(std::abs(prev.distance_to_limit / last.distance_to_limit - 2.0));
    });
    guarded(out, "discontinuity", "all a = 1 gives zero gap " + lab, tol.discontinuity, [&](Accumulator& a) {
        std::vector<Mat> ones(5, Mat::Identity(m.n(), m.n()));
        a.add(discontinuity(ones, t1, t2, t3, taus, m, true).limit_gap.norm());
    });
    guarded(out, "discontinuity", "a1 = 1 gives zero gap " + lab, tol.discontinuity, [&](Accumulator& a) {
        std::vector<Mat> b = as;
        b[0] = Mat::Identity(m.n(), m.n());
        a.add(discontinuity(b, t1, t2, t3, taus, m, true).limit_gap.norm());
    });
    return out;
}

const std::vector<std::string>& all_suites()
{
    static const std::vector<std::string> s = {"model",  "representation", "retraction", "liberation",
                                               "oracle", "tower",          "shift",      "discontinuity"};
    return s;
}

Scenario load_scenario(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    Scenario s;
    s.name = j.value("name", std::filesystem::path(path).stem().string());
    std::filesystem::path model = j.at("model").get<std::string>();
    if (model.is_relative()) model = std::filesystem::path(path).parent_path() / model;
    s.model_path = model.string();
    s.model = load_model(s.model_path);
    s.seed = j.value("seed", std::uint64_t{7});
    s.depth = j.value("depth", 4);
    s.max_word_len = j.value("max_word_len", 4);
    s.trials = j.value("trials", 20);
    auto rat = [](const nlohmann::json& v) {
        if (v.is_number_integer()) return Rational(v.get<long>());
        TimeExpr e = TimeExpr::parse(v.get<std::string>());
        if (!e.is_constant()) throw std::invalid_argument("scenario times must be rational constants");
        return e.constant();
    };
    for (const auto& t : j.value("times", nlohmann::json::array({"1/4", "1/2", "1"}))) s.times.push_back(rat(t));
    nlohmann::json tw = j.value("tower", nlohmann::json::array({"1/2", "1"}));
    s.tower_s = rat(tw.at(0));
    s.tower_t = rat(tw.at(1));
    nlohmann::json dc = j.value("discontinuity", nlohmann::json::array({1, 2, 3}));
    s.disc_t1 = rat(dc.at(0));
    s.disc_t2 = rat(dc.at(1));
    s.disc_t3 = rat(dc.at(2));
    if (j.contains("suites"))
        for (const auto& x : j.at("suites")) {
            std::string name = x.get<std::string>();
            if (std::find(all_suites().begin(), all_suites().end(), name) == all_suites().end())
                throw std::invalid_argument("unknown suite '" + name + "'");
            s.suites.push_back(name);
        }
    else
        s.suites = all_suites();
    if (j.contains("tolerances")) {
        const auto& t = j.at("tolerances");
        auto get = [&](const char* k, double& v) {
            if (t.contains(k)) {
                v = t.at(k).get<double>();
                if (!(v > 0)) throw std::invalid_argument(std::string("tolerance ") + k + " must be positive");
            }
        };
        get("model", s.tol.model);
        get("representation", s.tol.representation);
        get("retraction", s.tol.retraction);
        get("liberation", s.tol.liberation);
        get("oracle", s.tol.oracle);
        get("consistency", s.tol.consistency);
        get("shift", s.tol.shift);
        get("discontinuity", s.tol.discontinuity);
    }
    if (s.depth < 1) throw std::invalid_argument("depth must be at least 1");
    if (s.max_word_len < 1 || s.max_word_len > 4) throw std::invalid_argument("max_word_len must be in 1..4");
    if (!(0 < s.tower_s && s.tower_s < s.tower_t)) throw std::invalid_argument("tower times must satisfy 0 < s < t");
    if (!(0 < s.disc_t1 && s.disc_t1 < s.disc_t2 && s.disc_t2 < s.disc_t3))
        throw std::invalid_argument("discontinuity times must satisfy 0 < t1 < t2 < t3");
    return s;
}

bool Report::ok() const
{
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::string Report::json() const
{
    nlohmann::ordered_json j;
    j["scenario"] = scenario;
    j["seed"] = seed;
    j["pass"] = ok();
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
        nlohmann::ordered_json x;
        x["suite"] = c.suite;
        x["name"] = c.name;
        x["residual"] = c.residual;
        x["tolerance"] = c.tolerance;
        x["cases"] = c.cases;
        x["pass"] = c.pass;
        if (!c.detail.empty()) x["detail"] = c.detail;
        arr.push_back(x);
    }
    j["checks"] = arr;
    return j.dump(2) + "\n";
}

std::string Report::text() const
{
    std::ostringstream os;
    os << "scenario " << scenario << " (seed " << seed << ")\n";
    int failed = 0;
    for (const auto& c : checks) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3e <= %.1e", c.residual, c.tolerance);
        os << (c.pass ? "PASS " : "FAIL ") << c.suite << ": " << c.name << "  [" << buf << ", " << c.cases
           << " cases]";
        if (!c.detail.empty()) os << "  (" << c.detail << ")";
        os << "\n";
        failed += c.pass ? 0 : 1;
    }
    os << (failed ? std::to_string(failed) + " of " + std::to_string(checks.size()) + " checks failed"
                  : "all " + std::to_string(checks.size()) + " checks passed")
       << "\n";
    return os.str();
}

Report run_scenario(const Scenario& s)
{
    Report r;
    r.scenario = s.name;
    r.seed = s.seed;
    auto want = [&](const char* suite) {
        return std::find(s.suites.begin(), s.suites.end(), suite) != s.suites.end();
    };
    auto append = [&](std::vector<Check> v) { r.checks.insert(r.checks.end(), v.begin(), v.end()); };
    // The model is always checked; everything else presupposes a valid CP semigroup.
    append(check_model(s.model, s.times, s.tol));
    bool model_ok = r.ok();
    for (const auto& suite : all_suites()) {
        if (suite == "model" || !want(suite.c_str())) continue;
        if (!model_ok) {
            r.checks.push_back({suite, "skipped", 0, 0, 0, false, "model checks failed"});
            continue;
        }
        if (suite == "representation") append(check_representations(s.model, s.times, s.tol));
        if (suite == "retraction") append(check_retractions(s.model, s.times, s.depth, s.trials, s.seed, s.tol));
        if (suite == "liberation") append(check_liberation(s.model, s.times, s.depth, s.trials, s.seed, s.tol));
        if (suite == "oracle") append(check_oracle(s.model, s.times, s.max_word_len, s.trials, s.seed, s.tol));
        if (suite == "tower")
            append(check_tower(s.model, s.tower_s, s.tower_t, s.max_word_len, s.trials, s.seed, s.tol));
        if (suite == "shift") append(check_shift(s.model, s.max_word_len, s.trials, s.seed, s.tol));
        if (suite == "discontinuity")
            append(check_discontinuity(s.model, s.disc_t1, s.disc_t2, s.disc_t3, s.tol));
    }
    return r;
}

}  // namespace sauv
