// Acceptance suite: one PASS/FAIL line per criterion.
// usage: acceptance [--cli PATH] [--golden DIR]
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <sys/wait.h>

#include "ergokit/constructions.hpp"
#include "ergokit/dynamics.hpp"
#include "ergokit/error.hpp"
#include "ergokit/matcher.hpp"
#include "ergokit/metrics.hpp"
#include "generators.hpp"

using namespace th;

namespace {

struct Failure {
    std::string what;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw Failure{what};
}

bool is_id(const PMap& T) { return support(T).is_null(); }

// Translation by 2a on the even blocks, a random permutation of quarter cells
// of the odd blocks inside [-3, 4), identity on the remaining odd blocks.
PMap random_mixed(std::mt19937& rng) {
    Scalar a(static_cast<long>(rng() % 2) + 1);
    std::vector<Piece> ps{{{q(0), q(1)}, q(2), Scalar(2) * a, q(0)},
                          {{q(-2), q(-1)}, q(-2), Scalar(2) * a, q(0)},
                          {{q(5), q(6)}, q(2), q(0), q(0)},
                          {{q(-5), q(-4)}, q(-2), q(0), q(0)}};
    std::vector<int> perm(16);
    for (int i = 0; i < 16; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    auto cell = [](int i) { return Scalar(2 * (i / 4 - 2) + 1) + Scalar(i % 4, 4); };
    for (int i = 0; i < 16; ++i) ps.push_back({{cell(i), cell(i) + q(1, 4)}, q(0), cell(perm[i]) - cell(i), q(0)});
    return validate_bijection(PMap::from_pieces(ps));
}

// Smallest T-invariant set containing A, for maps whose orbits through A are finite.
IntervalSet saturate(const PMap& T, const IntervalSet& A) {
    IntervalSet S = A;
    for (int i = 0; i < 10000; ++i) {
        IntervalSet next = set_union(S, image(T, S));
        if (set_equal(next, S)) return S;
        S = next;
    }
    throw Failure{"saturation did not stabilize"};
}

// ------------------------------------------------------------------ criteria

std::string c1_separator() {
    auto check = [](const PMap& T) {
        IntervalSet A = separator(T, IntervalSet::line());
        IntervalSet S = support(T), TA = image(T, A), TiA = preimage(T, A);
        require(subset(A, S), "separator leaves the support");
        require(set_intersect(A, set_union(TA, TiA)).is_null(), "A meets T(A) or T^-1(A)");
        require(set_symdiff(set_union(A, set_union(TA, TiA)), S).is_null(), "A with its images differs from supp T");
        PMap Ti = inverse(T);
        for (auto& x : samples(6, 8)) {
            bool in = A.contains(x) || A.contains(apply(T, x)) || A.contains(apply(Ti, x));
            require(in == S.contains(x), "pointwise cover at " + x.str());
        }
        return A;
    };
    require(check(PMap::identity()).is_null(), "identity: A not empty");
    require(set_equal(check(swap01()), iv(0, 1)), "swap01: A differs from [0,1)");
    check(shift(q(1)));
    std::mt19937 rng(101);
    int n = 0;
    for (; n < 120; ++n) check(n % 2 ? random_map(rng) : random_perm_map(rng));
    return "3 examples + " + std::to_string(n) + " random maps";
}

std::string c2_exchange() {
    std::mt19937 rng(202);
    int tested = 0, infinite = 0;
    for (int it = 0; it < 1000 && tested < 120; ++it) {
        bool tails = it % 3 != 0;
        IntervalSet A = random_set(rng, tails), B = random_set(rng, tails);
        if (!(set_diff(A, B).measure() == set_diff(B, A).measure())) continue;
        ++tested;
        if (set_diff(A, B).measure().infinite) ++infinite;
        PMap U = exchange_involution(A, B);
        require(is_id(compose(U, U)), "U^2 != id");
        require(set_equal(image(U, A), B), "U(A) != B");
        require(subset(support(U), set_symdiff(A, B)), "supp U not inside A delta B");
        for (auto& x : samples(4, 12)) {
            require(apply(U, apply(U, x)) == x, "U^2 x != x at " + x.str());
            require(A.contains(x) == B.contains(apply(U, x)), "pointwise U(A) = B at " + x.str());
        }
    }
    require(tested >= 100 && infinite >= 10, "too few pairs");
    return std::to_string(tested) + " pairs, " + std::to_string(infinite) + " with infinite difference";
}

std::string c3_factorization() {
    auto check = [](const PMap& T, const IntervalSet& D, const Scalar& eps) {
        Factorization f = factor_split(T, D, eps, 1000);
        require(eq_ae(compose(f.t1, compose(f.t2, f.teps)), T), "T1 T2 Teps != T");
        IntervalSet s1 = support(f.t1), s2 = support(f.t2);
        require(set_intersect(s1, s2).is_null(), "supports meet");
        require(s1.measure() == s2.measure(), "support measures differ");
        require(set_intersect(s1, D).measure() == set_intersect(s2, D).measure(), "D measures differ");
        ExtMeasure me = support(f.teps).measure();
        require(!me.infinite && me.value < eps, "supp Teps too large");
        return f;
    };
    Factorization s = check(shift(q(1)), iv(0, 1), q(1, 2));
    require(set_intersect(support(s.t1), iv(0, 1)).measure() == ExtMeasure::fin(q(1, 2)), "x+1: D share");
    Factorization c = check(three_cycle(), iv(0, 1), q(1, 2));
    require(support(c.t1).measure() == ExtMeasure::fin(q(3, 2)), "3-cycle: support measure");
    std::mt19937 rng(303);
    int n = 0;
    for (int it = 0; it < 56; ++it, ++n) {
        long lo = static_cast<long>(rng() % 48) - 24, len = static_cast<long>(rng() % 16) + 1;
        IntervalSet D = IntervalSet::interval(Scalar(lo, 4), Scalar(lo + len, 4));
        switch (it % 3) {
        case 0: check(random_perm_map(rng), D, q(1, 3)); break;
        case 1: check(random_mixed(rng), D, q(1, 3)); break;
        default: check(shift(Scalar(static_cast<long>(rng() % 6) + 1, 2)), D, q(1, 3)); break;
        }
    }
    return "2 examples + " + std::to_string(n) + " random periodic/dissipative maps";
}

std::string c4_hopf() {
    int certs = 0;
    auto check = [&](const PMap& T) {
        HopfParts h = hopf(T, 1000);
        const PMap* p[3] = {&h.dissipative, &h.finite, &h.infinite};
        for (int i = 0; i < 3; ++i)
            for (int k = i + 1; k < 3; ++k) require(eq_ae(compose(*p[i], *p[k]), compose(*p[k], *p[i])), "factors do not commute");
        require(eq_ae(compose(h.dissipative, compose(h.finite, h.infinite)), T), "product != T");
        bool disj = true;
        IntervalSet all = union_all({support(h.dissipative), support(h.finite), support(h.infinite)}, &disj);
        require(disj && set_equal(all, support(T)), "supports do not partition supp T");
        for (auto& c : classify(T, 1000).comps) {
            require(verify_component(T, c), "certificate rejected");
            if (c.kind == Kind::Periodic)
                require(is_id(power(restrict_invariant(T, c.set), c.period)), "T^p != id on a periodic component");
            if (c.kind == Kind::Dissipative)
                require(set_equal(image(power(T, c.k), c.wandering), c.wandering.translate(c.c)), "T^k(W) != W + c");
            ++certs;
        }
    };
    int n = 0;
    for (auto& T : {PMap::identity(), shift(q(1)), swap01(), three_cycle()}) check(T), ++n;
    std::mt19937 rng(404);
    for (int i = 0; i < 20; ++i, ++n) check(i % 2 ? random_mixed(rng) : random_perm_map(rng));
    {
        Field f(5);
        check(rotation(golden()));
        check(blockwise_rotation(golden()));
        check(compose(rotation(golden()), core_map({{q(2), q(3), q(1)}, {q(3), q(4), q(-1)}})));
        n += 3;
    }
    return std::to_string(n) + " maps, " + std::to_string(certs) + " certificates re-checked";
}

std::string c5_pik() {
    std::mt19937 rng(505);
    int pairs = 0;
    for (; pairs < 50; ++pairs) {
        PMap S = random_perm_map(rng), T = random_perm_map(rng);
        ExtMeasure sT = support(T).measure(), dST = d_uf(S, T);
        for (long k = 1; k <= 5; ++k) {
            PMap pS = multiply_support(S, k), pT = multiply_support(T, k);
            require(support(pT).measure() == ExtMeasure::fin(Scalar(k) * sT.value), "support scaling");
            require(d_uf(pS, pT) == ExtMeasure::fin(Scalar(k) * dST.value), "d_uf scaling");
            require(eq_ae(multiply_support(compose(S, T), k), compose(pS, pT)), "homomorphism");
        }
    }
    return std::to_string(pairs) + " pairs, k = 1..5";
}

std::string c6_metrics() {
    PMap id = PMap::identity();
    long terms = 0;
    for (long n = 2; n <= 64; ++n) {
        PMap T = rotation(q(1, n));
        require(cm_metric(T, id) == q(2, 3) * q(1, n) * (q(1) - q(1, n)), "cm_metric at n = " + std::to_string(n));
        require(d_mu(T, id) == q(1, 3), "d_mu at n = " + std::to_string(n));
        for (long m = 0; m <= 4; ++m)
            for (auto& C : dyadic_level(m)) {
                require(weak_term(T, id, IntervalSet::interval(C.lo, C.hi)) <= q(2, n), "weak term at n = " + std::to_string(n));
                ++terms;
            }
    }
    return "n = 2..64, " + std::to_string(terms) + " weak terms";
}

std::string c7_uniform_weak() {
    std::mt19937 rng(707);
    int n = 0;
    for (; n < 220; ++n) {
        PMap S = n % 2 ? random_map(rng) : random_perm_map(rng), T = random_map(rng);
        IntervalSet C = random_cells(rng, static_cast<long>(rng() % 5) - 3);
        if (C.is_null()) C = iv(0, 1);
        ExtMeasure moved = set_symdiff(image(S, C), image(T, C)).measure(), du = d_uC(S, T, C);
        require(!moved.infinite && !du.infinite, "infinite value on finite C");
        require(moved.value <= Scalar(2) * du.value, "lambda(S(C) delta T(C)) > 2 d_uC");
    }
    return std::to_string(n) + " triples";
}

std::string c8_kac() {
    auto kac = [](const PMap& T, const IntervalSet& A) {
        Induced ind = induce(T, A, 10000);
        ExtMeasure sum = ExtMeasure::fin(q(0));
        for (auto& [An, n] : ind.parts) sum = sum + ExtMeasure::fin(Scalar(n) * An.measure().value);
        require(sum == saturate(T, A).measure(), "sum n lambda(A_n) != lambda(saturation)");
    };
    std::mt19937 rng(808);
    int n = 0;
    for (; n < 40; ++n) {
        PMap T = random_perm_map(rng);
        IntervalSet A = random_cells(rng, -2);
        if (A.is_null()) A = iv(0, 1);
        kac(T, A);
    }
    for (long den = 2; den <= 12; ++den)
        for (long p = 1; p < den; ++p) {
            long lo = static_cast<long>(rng() % 8), len = static_cast<long>(rng() % (8 - lo)) + 1;
            kac(rotation(q(p, den)), IntervalSet::interval(Scalar(lo, 8), Scalar(lo + len, 8)));
            ++n;
        }
    Field f(5);
    Scalar a = golden();
    PMap T = rotation(a);
    IntervalSet A = IntervalSet::interval(q(0), a);
    Induced ind = induce(T, A, 1000);
    int pts = 0;
    for (long k = 0; k < 100; ++k, ++pts) {
        Scalar x(2 * k + 1, 322);
        require(A.contains(x), "sample outside A");
        Scalar y = apply(T, x);
        long r = 1;
        while (!A.contains(y)) y = apply(T, y), ++r;
        require(apply(ind.map, x) == y, "induced map disagrees with simulation at " + x.str());
        require(r == 1 || r == 2, "golden return time outside {1, 2}");
    }
    return std::to_string(n) + " periodic/rational instances, " + std::to_string(pts) + " golden samples";
}

std::string c9_three_involutions() {
    auto check = [](const PMap& T) {
        auto r = three_involutions(T, 1000);
        require(r.size() == 3, "expected three factors");
        for (auto& u : r) require(is_id(compose(u, u)), "factor is not an involution");
        require(eq_ae(compose(r[0], compose(r[1], r[2])), T), "product != T");
    };
    int n = 0;
    for (auto& T : {PMap::identity(), swap01(), three_cycle(), shift(q(1)), shift(q(-5, 2))}) check(T), ++n;
    std::mt19937 rng(909);
    for (int i = 0; i < 30; ++i, ++n) check(i % 2 ? random_mixed(rng) : random_perm_map(rng));
    Field f(5);
    int rejected = 0;
    for (auto& T : {rotation(golden()), blockwise_rotation(golden())}) {
        try {
            three_involutions(T, 1000);
        } catch (const Error& e) {
            require(e.code() == "UNSUPPORTED_APERIODIC", "aperiodic map gave " + e.code());
            ++rejected;
        }
    }
    require(rejected == 2, "aperiodic map was not rejected");
    return std::to_string(n) + " supported maps, " + std::to_string(rejected) + " aperiodic rejected";
}

std::string c10_normalgen() {
    for (const char* t : {"1/4", "1", "2", "4", "8"}) {
        auto [W, w] = normal_involution_with_measure(swap01(), q(t));
        require(support(W).measure() == ExtMeasure::fin(q(t)), std::string("support measure at t = ") + t);
        require(is_id(compose(W, W)), "W is not an involution");
        require(eq_ae(w.evaluate({{"U", swap01()}}), W), std::string("word does not evaluate to W at t = ") + t);
    }
    return "t in {1/4, 1, 2, 4, 8}";
}

std::string c11_staircase() {
    int pairs = 0;
    for (long s8 = 0; s8 <= 8; ++s8)
        for (long t8 = s8 + 1; t8 <= 8; ++t8, ++pairs) {
            Scalar s(s8, 8), t(t8, 8);
            IntervalSet As = staircase_set(s), At = staircase_set(t);
            require(set_diff(At, As).measure().infinite, "lambda(A_t \\ A_s) finite");
            require(set_diff(As, At).measure().is_zero(), "lambda(A_s \\ A_t) nonzero");
            // A_t laid on the even blocks, exchanged with its copy on the odd blocks
            auto even = [](const Scalar& u) {
                IntervalSet e;
                if (u.sign() > 0) e.right = e.left = Tail{q(0), q(2), {{q(0), u}}};
                return e.canonical();
            };
            IntervalSet Es = even(s), Et = even(t);
            PMap Us = exchange_involution(Es, Es.translate(q(1))), Ut = exchange_involution(Et, Et.translate(q(1)));
            IntervalSet sp = support(compose(inverse(Us), Ut));
            require(sp.measure().infinite, "product support finite");
            require(set_equal(sp.translate(q(2)), sp), "product support not 2-periodic");
            require(list_length(sp.window(q(0), q(2))) == Scalar(2) * (t - s), "support per period != 2(t - s)");
        }
    return std::to_string(pairs) + " pairs s < t";
}

std::string c12_truncation() {
    IntervalSet A;
    A.right = A.left = Tail{q(0), q(2), {{q(0), q(1)}}};
    PMap U = exchange_involution(A.canonical(), A.canonical().translate(q(1)));
    Scalar prev(1);
    for (long n = 1; n <= 32; ++n) {
        IntervalSet X = IntervalSet::interval(Scalar(-n), Scalar(n));
        PMap V = truncate_support(U, X);
        Scalar d = d_mu(V, U);
        Scalar bound = mu(complement(X)) + mu(complement(image(U, X)));
        require(d <= bound, "d_mu above the bound at n = " + std::to_string(n));
        require(d <= prev, "d_mu increased at n = " + std::to_string(n));
        prev = d;
    }
    mpz_class big;
    mpz_ui_pow_ui(big.get_mpz_t(), 2, 28);
    require(prev < Scalar(mpq_class(1, big)), "d_mu at n = 32 not below 2^-28");
    return "n = 1..32, final d_mu = " + prev.str();
}

// Runs the CLI and captures stdout.
std::string run_cli(const std::string& cmd, int& status) {
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) throw Failure{"cannot start " + cmd};
    std::string out;
    char buf[4096];
    size_t k;
    while ((k = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, k);
    int st = pclose(p);
    status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Failure{"cannot read " + path};
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string c13_golden(const std::string& cli, const std::string& dir) {
    unsetenv("ERGOKIT_BUDGET");
    std::ifstream cases(dir + "/cases.txt");
    require(static_cast<bool>(cases), "missing " + dir + "/cases.txt");
    std::string line;
    int n = 0;
    while (std::getline(cases, line)) {
        if (line.empty()) continue;
        std::string file = line.substr(0, line.find(' ')), argv = line.substr(line.find(' ') + 1);
        std::string cmd = cli + " " + dir + "/" + file + " " + argv + " 2>/dev/null";
        int st1 = 0, st2 = 0;
        std::string r1 = run_cli(cmd, st1), r2 = run_cli(cmd, st2);
        require(st1 == 0 && st2 == 0, file + ": nonzero exit");
        require(r1 == r2, file + ": reports differ between runs");
        require(r1.find("\"verified\": true") != std::string::npos, file + ": not verified");
        require(r1.find("\"pass\": false") == std::string::npos, file + ": a check failed");
        std::string stem = file.substr(0, file.rfind('.'));
        require(r1 == read_file(dir + "/expected/" + stem + ".out"), file + ": report differs from the stored one");
        ++n;
    }
    require(n == 20, "expected 20 golden workspaces, found " + std::to_string(n));
    return std::to_string(n) + " workspaces, two runs each";
}

}  // namespace

int main(int argc, char** argv) {
    std::string cli = ERGOKIT_CLI_PATH, golden = ERGOKIT_GOLDEN_DIR;
    for (int i = 1; i + 1 < argc; i += 2) {
        std::string k = argv[i];
        if (k == "--cli") cli = argv[i + 1];
        else if (k == "--golden") golden = argv[i + 1];
    }
    Scalar::set_field(0);
    std::vector<std::pair<std::string, std::function<std::string()>>> criteria = {
        {"separator identity", c1_separator},
        {"exchanging involutions", c2_exchange},
        {"factorization T = T1 T2 Teps", c3_factorization},
        {"Hopf pipeline", c4_hopf},
        {"support multiplication laws", c5_pik},
        {"metric hierarchy on shrinking rotations", c6_metrics},
        {"uniform metric bounds set transport", c7_uniform_weak},
        {"Kac formula for first returns", c8_kac},
        {"three involutions", c9_three_involutions},
        {"normal generation", c10_normalgen},
        {"staircase family", c11_staircase},
        {"truncation density", c12_truncation},
        {"CLI determinism", [&] { return c13_golden(cli, golden); }},
    };
    int failed = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = true;
        try {
            detail = criteria[i].second();
        } catch (const Failure& f) {
            ok = false, detail = f.what;
        } catch (const std::exception& e) {
            ok = false, detail = std::string("exception: ") + e.what();
        }
        Scalar::set_field(0);
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (ok && secs >= 60) ok = false, detail += ", over 60 s";
        failed += !ok;
        std::printf("%s %2zu %s: %s (%.1f s)\n", ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
