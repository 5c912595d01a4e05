#include "ergokit/workspace.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "ergokit/constructions.hpp"
#include "ergokit/dynamics.hpp"
#include "ergokit/error.hpp"
#include "ergokit/matcher.hpp"
#include "ergokit/metrics.hpp"

namespace ergokit {

namespace {

const long kDefaultBudget = 10000;
const long kDefaultTrunc = 32;

bool is_reserved(const std::string& n) { return n == "R" || n == "id"; }

void check_name(const std::string& n, std::set<std::string>& seen, const std::string& where) {
    if (n.empty() || is_reserved(n)) throw Error("PARSE_ERROR", where + ": \"" + n + "\" is not an allowed name");
    if (!seen.insert(n).second) throw Error("PARSE_ERROR", where + ": name \"" + n + "\" declared twice");
}

// Re-raises a bijection failure as VALIDATION_ERROR, keeping the witness.
template <class F>
auto validated(const std::string& what, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        static const std::set<std::string> codes = {"DOMAIN_GAP", "DOMAIN_OVERLAP", "IMAGE_GAP", "IMAGE_OVERLAP"};
        if (!codes.count(e.code())) throw;
        std::string msg = what + ": " + e.code() + ": " + e.message();
        if (e.witness()) throw Error("VALIDATION_ERROR", msg, e.witness()->first, e.witness()->second);
        throw Error("VALIDATION_ERROR", msg);
    }
}

const ojson& object_at(const ojson& j, const char* key) {
    const ojson& v = j.at(key);
    if (!v.is_object()) throw Error("PARSE_ERROR", std::string(key) + ": expected an object");
    return v;
}

std::optional<long> option_long(const ojson& o, const char* key) {
    if (!o.contains(key)) return std::nullopt;
    const ojson& v = o.at(key);
    if (!v.is_number_integer() || v.get<long>() < 1)
        throw Error("PARSE_ERROR", std::string("options.") + key + ": expected a positive integer");
    return v.get<long>();
}

// Fixed rational probe points in [-8, 8) for pointwise cross-checks.
std::vector<Scalar> probes() {
    std::vector<Scalar> out;
    for (long k = -56; k < 56; ++k) out.push_back(Scalar(k, 7) + Scalar(1, 11));
    return out;
}

struct Checks {
    ojson list = ojson::array();
    bool all = true;

    void add(const std::string& name, bool ok, ojson values = nullptr) {
        ojson c;
        c["check"] = name;
        c["pass"] = ok;
        if (!values.is_null()) c["values"] = std::move(values);
        list.push_back(std::move(c));
        all = all && ok;
    }
};

struct PlotRow {
    Scalar lo, hi;
    std::string kind;
};

struct Built {
    ojson head = ojson::object();  // fields placed before "result" (metric reports)
    ojson result;
    Checks checks;
    ojson certificates = ojson::array();
    std::vector<PlotRow> plot;
};

class Runner {
public:
    Runner(const Workspace& ws, const Request& req) : ws_(ws), req_(req) {
        budget_ = kDefaultBudget;
        if (ws.budget) budget_ = *ws.budget;
        if (const char* env = std::getenv("ERGOKIT_BUDGET")) budget_ = parse_long(env, "ERGOKIT_BUDGET");
        if (req.budget) budget_ = *req.budget;
        if (budget_ < 1) throw Error("USAGE_ERROR", "budget must be positive");
        trunc_ = req.trunc ? *req.trunc : ws.weak_truncation ? *ws.weak_truncation : kDefaultTrunc;
        if (trunc_ < 1 || trunc_ > 4096) throw Error("USAGE_ERROR", "truncation must lie in 1..4096");
    }

    ojson echo() const {
        ojson o;
        o["command"] = req_.command;
        o["op"] = req_.op;
        o["args"] = req_.args;
        ojson opt;
        opt["budget"] = budget_;
        if (req_.eps) opt["eps"] = eps().str();
        opt["trunc"] = trunc_;
        o["options"] = opt;
        return o;
    }

    Built run() {
        const std::string& c = req_.command;
        if (req_.plot && !(c == "analyze" && (req_.op == "classify" || req_.op == "hopf")))
            throw Error("USAGE_ERROR", "--plot applies to analyze classify and analyze hopf");
        if (c == "validate") return validate();
        if (c == "report") return report();
        if (c == "op") return op();
        if (c == "metric") return metric();
        if (c == "construct") return construct();
        if (c == "analyze") return analyze();
        throw Error("USAGE_ERROR", "unknown subcommand \"" + c + "\"");
    }

private:
    const Workspace& ws_;
    const Request& req_;
    long budget_;
    long trunc_;

    static long parse_long(const std::string& s, const std::string& what) {
        char* end = nullptr;
        long v = std::strtol(s.c_str(), &end, 10);
        if (s.empty() || *end != '\0') throw Error("USAGE_ERROR", what + ": expected an integer, got \"" + s + "\"");
        return v;
    }

    Scalar eps() const {
        if (!req_.eps) return Scalar(1, 2);
        Scalar e = Scalar::parse(*req_.eps);
        if (e.sign() <= 0) throw Error("USAGE_ERROR", "--eps must be positive");
        return e;
    }

    void arity(size_t lo, size_t hi) const {
        size_t n = req_.args.size();
        if (n < lo || n > hi)
            throw Error("USAGE_ERROR", req_.command + " " + req_.op + " takes " + std::to_string(lo) +
                                           (hi != lo ? ".." + std::to_string(hi) : "") + " arguments, got " + std::to_string(n));
    }
    const std::string& arg(size_t i) const { return req_.args.at(i); }

    IntervalSet set_arg(size_t i) const {
        const std::string& n = arg(i);
        if (n == "R") return IntervalSet::line();
        auto it = ws_.sets.find(n);
        if (it == ws_.sets.end()) throw Error("UNKNOWN_NAME", "no set named \"" + n + "\"");
        return it->second;
    }
    PMap map_arg(size_t i) const {
        const std::string& n = arg(i);
        if (n == "id") return PMap::identity();
        auto it = ws_.maps.find(n);
        if (it == ws_.maps.end()) throw Error("UNKNOWN_NAME", "no map named \"" + n + "\"");
        return it->second;
    }
    PartialIso partial_arg(size_t i) const {
        auto it = ws_.partials.find(arg(i));
        if (it != ws_.partials.end()) return it->second;
        if (arg(i) != "id" && !ws_.maps.count(arg(i))) throw Error("UNKNOWN_NAME", "no partial isomorphism or map named \"" + arg(i) + "\"");
        return {map_arg(i), IntervalSet::line(), IntervalSet::line()};
    }
    long long_arg(size_t i) const { return parse_long(arg(i), "argument " + std::to_string(i + 1)); }
    Scalar scalar_arg(size_t i) const { return Scalar::parse(arg(i)); }

    static bool is_id(const PMap& T) { return support(T).is_null(); }
    static bool involutive(const PMap& U) { return is_id(compose(U, U)); }

    // Pointwise oracle over the fixed probe points.
    static bool pointwise(const std::function<bool(const Scalar&)>& ok) {
        for (auto& x : probes())
            if (!ok(x)) return false;
        return true;
    }

    static ojson word_json(const GroupWord& w) {
        ojson letters = ojson::array();
        for (auto& l : w.letters) {
            ojson e;
            e["gen"] = l.tag;
            e["exp"] = l.exp;
            e["conj"] = l.conj ? to_json(*l.conj) : ojson(nullptr);
            letters.push_back(e);
        }
        ojson j;
        j["text"] = w.str();
        j["letters"] = letters;
        return j;
    }

    // ---------------------------------------------------------------- validate / report

    void workspace_checks(Checks& ch) const {
        for (auto& [n, T] : ws_.maps) {
            bool ok = true;
            try {
                validate_bijection(T);
            } catch (const Error&) {
                ok = false;
            }
            ch.add("bijection " + n, ok);
        }
        for (auto& [n, p] : ws_.partials) {
            bool ok = true;
            try {
                check_partial(p.map, p.dom, p.rng);
            } catch (const Error&) {
                ok = false;
            }
            ch.add("partial " + n, ok);
        }
        std::string once = ws_.to_json().dump(2);
        std::string twice = parse_workspace(ws_.to_json()).to_json().dump(2);
        ch.add("reemission_stable", once == twice);
    }

    Built validate() {
        arity(0, 0);
        Built b;
        b.result["field"] = ws_.d;
        b.result["sets"] = ws_.sets.size();
        b.result["maps"] = ws_.maps.size();
        b.result["partials"] = ws_.partials.size();
        workspace_checks(b.checks);
        return b;
    }

    Built report() {
        arity(0, 0);
        Built b;
        b.result["workspace"] = ws_.to_json();
        ojson maps = ojson::object();
        for (auto& [n, T] : ws_.maps) {
            IntervalSet s = support(T);
            ojson m;
            m["support"] = to_json(s);
            m["support_measure"] = to_json(s.measure());
            try {
                m["support_mu"] = mu(s).str();
            } catch (const Error&) {
                m["support_mu"] = nullptr;
            }
            m["involution"] = involutive(T);
            maps[n] = m;
        }
        b.result["maps"] = maps;
        workspace_checks(b.checks);
        return b;
    }

    // ---------------------------------------------------------------- op

    Built op() {
        const std::string& o = req_.op;
        Built b;
        Checks& ch = b.checks;
        auto set_binop = [&](BoolOp kind) {
            arity(2, 2);
            IntervalSet A = set_arg(0), B = set_arg(1), R;
            switch (kind) {
            case BoolOp::Union:
                R = set_union(A, B);
                ch.add("contains_both", subset(A, R) && subset(B, R));
                ch.add("nothing_extra", set_equal(set_diff(R, A), set_diff(B, A)));
                break;
            case BoolOp::Intersect:
                R = set_intersect(A, B);
                ch.add("inside_both", subset(R, A) && subset(R, B));
                ch.add("nothing_missing", set_equal(set_diff(A, R), set_diff(A, B)));
                break;
            case BoolOp::Diff:
                R = set_diff(A, B);
                ch.add("inside_first", subset(R, A));
                ch.add("disjoint_from_second", disjoint(R, B));
                ch.add("reassembles", set_equal(set_union(R, set_intersect(A, B)), A));
                break;
            case BoolOp::Symdiff:
                R = set_symdiff(A, B);
                ch.add("two_differences", set_equal(R, set_union(set_diff(A, B), set_diff(B, A))));
                ch.add("disjoint_from_meet", disjoint(R, set_intersect(A, B)));
                break;
            }
            b.result["set"] = to_json(R);
            b.result["measure"] = to_json(R.measure());
            return b;
        };
        if (o == "union") return set_binop(BoolOp::Union);
        if (o == "intersect") return set_binop(BoolOp::Intersect);
        if (o == "diff") return set_binop(BoolOp::Diff);
        if (o == "symdiff") return set_binop(BoolOp::Symdiff);
        if (o == "complement") {
            arity(1, 1);
            IntervalSet A = set_arg(0), R = complement(A);
            ch.add("disjoint", disjoint(R, A));
            ch.add("covers_line", set_equal(set_union(R, A), IntervalSet::line()));
            b.result["set"] = to_json(R);
            return b;
        }
        if (o == "measure") {
            arity(1, 1);
            IntervalSet A = set_arg(0);
            Scalar m = mu(A), mc = mu(complement(A));
            b.result["lebesgue"] = to_json(A.measure());
            b.result["mu"] = m.str();
            ch.add("mu_with_complement_is_one", m + mc == Scalar(1), ojson{{"mu_complement", mc.str()}});
            return b;
        }
        if (o == "staircase") {
            arity(1, 1);
            Scalar t = scalar_arg(0);
            IntervalSet R = staircase_set(t);
            ch.add("integer_periodic", set_equal(R.translate(Scalar(1)), R));
            ch.add("unit_window_measure", list_length(R.window(Scalar(0), Scalar(1))) == t);
            b.result["set"] = to_json(R);
            return b;
        }
        if (o == "sup_increasing") {
            arity(1, 64);
            std::vector<IntervalSet> sets;
            for (size_t i = 0; i < req_.args.size(); ++i) sets.push_back(set_arg(i));
            IntervalSet R = sup_increasing(sets);
            bool ok = true;
            for (auto& s : sets) ok = ok && subset(s, R);
            ch.add("contains_members", ok);
            ch.add("equals_last_member_union", set_equal(R, sets.back()));
            b.result["set"] = to_json(R);
            b.result["measure"] = to_json(R.measure());
            return b;
        }
        if (o == "compose") {
            arity(2, 2);
            PMap S = map_arg(0), T = map_arg(1), R = validated("composition", [&] { return validate_bijection(compose(S, T)); });
            ch.add("bijection", true);
            ch.add("pointwise", pointwise([&](const Scalar& x) { return apply(R, x) == apply(S, apply(T, x)); }));
            b.result["map"] = to_json(R);
            return b;
        }
        if (o == "invert") {
            arity(1, 1);
            PMap T = map_arg(0), R = validate_bijection(inverse(T));
            ch.add("left_inverse", is_id(compose(R, T)));
            ch.add("pointwise", pointwise([&](const Scalar& x) { return apply(R, apply(T, x)) == x; }));
            b.result["map"] = to_json(R);
            return b;
        }
        if (o == "power") {
            arity(2, 2);
            PMap T = map_arg(0);
            long n = long_arg(1);
            PMap R = validate_bijection(power(T, n));
            ch.add("commutes_with_T", eq_ae(compose(R, T), compose(T, R)));
            if (std::labs(n) <= 64) {
                PMap step = n < 0 ? inverse(T) : T;
                ch.add("pointwise", pointwise([&](const Scalar& x) {
                    Scalar y = x;
                    for (long i = 0; i < std::labs(n); ++i) y = apply(step, y);
                    return apply(R, x) == y;
                }));
            }
            b.result["map"] = to_json(R);
            return b;
        }
        if (o == "support") {
            arity(1, 1);
            PMap T = map_arg(0);
            IntervalSet R = support(T);
            ch.add("pointwise", pointwise([&](const Scalar& x) { return (apply(T, x) != x) == R.contains(x); }));
            ch.add("invariant", set_equal(image(T, R), R));
            b.result["set"] = to_json(R);
            b.result["measure"] = to_json(R.measure());
            return b;
        }
        if (o == "image" || o == "preimage") {
            arity(2, 2);
            PMap T = map_arg(0);
            IntervalSet A = set_arg(1);
            bool fwd = o == "image";
            IntervalSet R = fwd ? image(T, A) : preimage(T, A);
            ch.add("measure_preserved", R.measure() == A.measure());
            ch.add("round_trip", set_equal(fwd ? preimage(T, R) : image(T, R), A));
            ch.add("pointwise", pointwise([&](const Scalar& x) {
                return fwd ? A.contains(x) == R.contains(apply(T, x)) : R.contains(x) == A.contains(apply(T, x));
            }));
            b.result["set"] = to_json(R);
            return b;
        }
        if (o == "eq_ae") {
            arity(2, 2);
            PMap S = map_arg(0), T = map_arg(1);
            bool e = eq_ae(S, T);
            IntervalSet dis = disagreement(S, T);
            ch.add("disagreement_null_iff_equal", dis.is_null() == e);
            b.result["equal"] = e;
            b.result["disagreement"] = to_json(dis);
            return b;
        }
        if (o == "restrict") {
            arity(2, 2);
            PMap T = map_arg(0);
            IntervalSet A = set_arg(1);
            PartialIso p = partial_restrict(T, A);
            check_partial(p.map, p.dom, p.rng);
            ch.add("partial_iso", true);
            ch.add("domain_is_A", set_equal(p.dom, A));
            ch.add("range_is_image", set_equal(p.rng, image(T, A)));
            b.result["partial"] = to_json(p);
            return b;
        }
        if (o == "cutpaste") {
            if (req_.args.empty() || req_.args.size() % 2) throw Error("USAGE_ERROR", "op cutpaste takes map/set pairs");
            std::vector<std::pair<PMap, IntervalSet>> pairs;
            for (size_t i = 0; i < req_.args.size(); i += 2) pairs.push_back({map_arg(i), set_arg(i + 1)});
            PMap R = cut_and_paste(pairs);
            ch.add("bijection", true);
            ch.add("pointwise", pointwise([&](const Scalar& x) {
                for (auto& [T, A] : pairs)
                    if (A.contains(x)) return apply(R, x) == apply(T, x);
                return false;
            }));
            b.result["map"] = to_json(R);
            return b;
        }
        if (o == "apply") {
            arity(2, 2);
            PMap T = map_arg(0);
            Scalar x = scalar_arg(1), y = apply(T, x);
            ch.add("inverse_returns", apply(inverse(T), y) == x);
            b.result["value"] = y.str();
            return b;
        }
        throw Error("USAGE_ERROR", "unknown op \"" + o + "\"");
    }

    // ---------------------------------------------------------------- metric

    Built metric() {
        const std::string& o = req_.op;
        Built b;
        Checks& ch = b.checks;
        b.head["metric"] = o;
        auto finish = [&](const std::string& v, const std::string& swapped, const std::string& diag) {
            b.head["value"] = v;
            b.head["exact"] = true;
            ch.add("symmetric", v == swapped);
            ch.add("zero_on_diagonal", diag == "0");
            return b;
        };
        if (o == "d_uC") {
            arity(3, 3);
            PMap S = map_arg(0), T = map_arg(1);
            IntervalSet C = set_arg(2);
            ExtMeasure v = d_uC(S, T, C);
            if (C.bounded()) {
                ExtMeasure moved = set_symdiff(image(S, C), image(T, C)).measure();
                ch.add("transport_bound", !moved.infinite && !v.infinite && !(Scalar(2) * v.value < moved.value),
                       ojson{{"symdiff_of_images", moved.str()}});
            }
            return finish(v.str(), d_uC(T, S, C).str(), d_uC(S, S, C).str());
        }
        if (o == "d_mu") {
            arity(2, 2);
            PMap S = map_arg(0), T = map_arg(1);
            Scalar v = d_mu(S, T);
            ch.add("equals_mu_of_disagreement", v == mu(disagreement(S, T)));
            return finish(v.str(), d_mu(T, S).str(), d_mu(S, S).str());
        }
        if (o == "d_uf") {
            arity(2, 2);
            PMap S = map_arg(0), T = map_arg(1);
            ExtMeasure v = d_uf(S, T);
            ch.add("equals_lebesgue_of_disagreement", v == disagreement(S, T).measure());
            return finish(v.str(), d_uf(T, S).str(), d_uf(S, S).str());
        }
        if (o == "weak") {
            arity(2, 2);
            PMap S = map_arg(0), T = map_arg(1);
            WeakValue v = weak_metric(S, T, trunc_);
            b.head["truncation_error"] = "1/2^" + std::to_string(trunc_);
            mpz_class p;
            mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(trunc_));
            ch.add("truncation_error_value", v.truncation_error == Scalar(mpq_class(1, p)));
            return finish(v.value.str(), weak_metric(T, S, trunc_).value.str(), weak_metric(S, S, trunc_).value.str());
        }
        if (o == "cm") {
            arity(2, 2);
            PMap S = map_arg(0), T = map_arg(1);
            Scalar v = cm_metric(S, T);
            ch.add("bounded_by_d_mu", !(d_mu(S, T) < v));
            return finish(v.str(), cm_metric(T, S).str(), cm_metric(S, S).str());
        }
        if (o == "partial") {
            arity(2, 2);
            PartialIso P = partial_arg(0), Q = partial_arg(1);
            Scalar v = partial_metric(P, Q);
            return finish(v.str(), partial_metric(Q, P).str(), partial_metric(P, P).str());
        }
        throw Error("USAGE_ERROR", "unknown metric \"" + o + "\"");
    }

    // ---------------------------------------------------------------- construct

    Built construct() {
        const std::string& o = req_.op;
        Built b;
        Checks& ch = b.checks;
        if (o == "separator") {
            arity(1, 2);
            PMap T = map_arg(0);
            IntervalSet C = req_.args.size() > 1 ? set_arg(1) : IntervalSet::line();
            IntervalSet A = separator(T, C);
            IntervalSet X = set_intersect(C, support(T)), TA = image(T, A), TiA = preimage(T, A);
            ch.add("inside_C_and_support", subset(A, X));
            ch.add("disjoint_from_images", disjoint(A, set_union(TA, TiA)));
            ch.add("covers_C_and_support", subset(X, union_all({A, TA, TiA})));
            ch.add("separator_identity", separator_holds(T, C, A));
            b.result["set"] = to_json(A);
            return b;
        }
        if (o == "exchange") {
            arity(2, 2);
            IntervalSet A = set_arg(0), B = set_arg(1);
            PMap U = exchange_involution(A, B);
            ch.add("involution", involutive(U));
            ch.add("maps_A_onto_B", set_equal(image(U, A), B));
            ch.add("support_in_symdiff", subset(support(U), set_symdiff(A, B)));
            b.result["map"] = to_json(U);
            return b;
        }
        if (o == "sendwithin") {
            arity(3, 3);
            IntervalSet C = set_arg(0), A = set_arg(1), B = set_arg(2);
            PMap R = send_within(C, A, B);
            ch.add("bijection", true);
            ch.add("maps_A_onto_B", set_equal(image(R, A), B));
            ch.add("maps_rest_onto_rest", set_equal(image(R, set_diff(C, A)), set_diff(C, B)));
            ch.add("support_in_C", subset(support(R), C));
            b.result["map"] = to_json(R);
            return b;
        }
        if (o == "commutator") {
            arity(2, 2);
            PMap T = map_arg(0);
            IntervalSet B = set_arg(1);
            WordResult r = commutator_involution(T, B);
            ch.add("involution", involutive(r.map));
            ch.add("support_is_B_and_TB", set_equal(support(r.map), set_union(B, image(T, B))));
            ch.add("word_evaluates", eq_ae(r.word.evaluate({{"T", T}}), r.map));
            b.result["map"] = to_json(r.map);
            b.result["word"] = word_json(r.word);
            return b;
        }
        if (o == "conjugate") {
            arity(2, 3);
            PMap U = map_arg(0), V = map_arg(1);
            IntervalSet C = req_.args.size() > 2 ? set_arg(2) : IntervalSet::line();
            PMap P = conjugate_involutions(U, V, C);
            ch.add("conjugates_U_to_V", eq_ae(compose(P, compose(U, inverse(P))), V));
            ch.add("support_in_C", subset(support(P), C));
            ch.add("pointwise", pointwise([&](const Scalar& x) { return apply(P, apply(U, x)) == apply(V, apply(P, x)); }));
            b.result["map"] = to_json(P);
            return b;
        }
        if (o == "threeinv") {
            arity(1, 1);
            PMap T = map_arg(0);
            std::vector<PMap> r = three_involutions(T, budget_);
            ojson maps = ojson::array();
            for (size_t i = 0; i < r.size(); ++i) {
                ch.add("involution U" + std::to_string(i + 1), involutive(r[i]));
                maps.push_back(to_json(r[i]));
            }
            ch.add("product_is_T", eq_ae(compose(r[0], compose(r[1], r[2])), T));
            b.result["involutions"] = maps;
            return b;
        }
        if (o == "multk") {
            arity(2, 2);
            PMap T = map_arg(0);
            long k = long_arg(1);
            if (k < 1 || k > 64) throw Error("OUT_OF_RANGE", "k must lie in 1..64");
            PMap R = multiply_support(T, k);
            ExtMeasure s = support(T).measure(), sk = support(R).measure();
            ch.add("bijection", true);
            ch.add("support_measure_scaled", !s.infinite && !sk.infinite && sk.value == Scalar(k) * s.value,
                   ojson{{"support", s.str()}, {"scaled_support", sk.str()}});
            b.result["map"] = to_json(R);
            return b;
        }
        if (o == "normalgen") {
            arity(2, 2);
            PMap U = map_arg(0);
            Scalar t = scalar_arg(1);
            WordResult r = normal_involution_with_measure(U, t);
            ExtMeasure s = support(r.map).measure();
            ch.add("involution", involutive(r.map));
            ch.add("support_measure", s == ExtMeasure::fin(t), ojson{{"measure", s.str()}});
            ch.add("word_evaluates", eq_ae(r.word.evaluate({{"U", U}}), r.map));
            b.result["map"] = to_json(r.map);
            b.result["word"] = word_json(r.word);
            return b;
        }
        if (o == "partialiso") {
            arity(2, 2);
            IntervalSet A = set_arg(0), B = set_arg(1);
            PartialIso p = partial_iso_between(A, B);
            check_partial(p.map, p.dom, p.rng);
            ch.add("partial_iso", true);
            ch.add("domain_is_A", set_equal(p.dom, A));
            ch.add("image_is_B", set_equal(image(p.map, A), B));
            b.result["partial"] = to_json(p);
            return b;
        }
        throw Error("USAGE_ERROR", "unknown construction \"" + o + "\"");
    }

    // ---------------------------------------------------------------- analyze

    static void plot_set(std::vector<PlotRow>& rows, const IntervalSet& s0, const std::string& kind) {
        IntervalSet s = s0.canonical();
        if (s.bounded()) {
            for (auto& i : s.core) rows.push_back({i.lo, i.hi, kind});
            return;
        }
        Scalar lo(-16), hi(16);
        if (!s.core.empty()) lo = min(lo, s.core.front().lo), hi = max(hi, s.core.back().hi);
        if (s.right) hi = max(hi, s.right->start + Scalar(4) * s.right->period);
        if (s.left) lo = min(lo, s.left->start - Scalar(4) * s.left->period);
        for (auto& i : s.window(lo, hi)) rows.push_back({i.lo, i.hi, kind});
    }

    static ojson component_json(const Component& c) {
        ojson j;
        j["kind"] = kind_name(c.kind);
        j["set"] = to_json(c.set);
        switch (c.kind) {
        case Kind::Periodic:
            j["period"] = c.period;
            break;
        case Kind::Dissipative:
            j["wandering"] = to_json(c.wandering);
            j["k"] = c.k;
            j["c"] = c.c.str();
            break;
        case Kind::Aperiodic: {
            ojson ls = ojson::array();
            for (auto& l : c.lengths) ls.push_back(l.str());
            j["lengths"] = ls;
            j["rotation"] = c.rotation.str();
            break;
        }
        case Kind::Unknown:
            break;
        }
        j["certificate"] = c.certificate;
        return j;
    }

    void certify(Built& b, const PMap& T, const Classification& cl) {
        for (size_t i = 0; i < cl.comps.size(); ++i) {
            const Component& c = cl.comps[i];
            b.certificates.push_back(component_json(c));
            if (c.kind != Kind::Unknown) b.checks.add("certificate " + std::to_string(i), verify_component(T, c));
        }
    }

    Built analyze() {
        const std::string& o = req_.op;
        Built b;
        Checks& ch = b.checks;
        if (o == "classify") {
            arity(1, 1);
            PMap T = map_arg(0);
            Classification cl = classify(T, budget_);
            std::vector<IntervalSet> sets;
            for (auto& c : cl.comps) sets.push_back(c.set);
            bool disj = true;
            IntervalSet all = union_all(sets, &disj);
            ch.add("components_partition_support", disj && set_equal(all, support(T)));
            certify(b, T, cl);
            ojson comps = ojson::array();
            for (auto& c : cl.comps) {
                ojson j;
                j["kind"] = kind_name(c.kind);
                j["set"] = to_json(c.set);
                comps.push_back(j);
                plot_set(b.plot, c.set, kind_name(c.kind));
            }
            b.result["components"] = comps;
            b.result["complete"] = cl.complete();
            return b;
        }
        if (o == "hopf") {
            arity(1, 1);
            PMap T = map_arg(0);
            HopfParts h = hopf(T, budget_);
            const PMap* parts[3] = {&h.dissipative, &h.finite, &h.infinite};
            const char* names[3] = {"dissipative", "periodic", "aperiodic"};
            bool comm = true;
            for (int i = 0; i < 3; ++i)
                for (int k = i + 1; k < 3; ++k) comm = comm && eq_ae(compose(*parts[i], *parts[k]), compose(*parts[k], *parts[i]));
            ch.add("factors_commute", comm);
            ch.add("product_is_T", eq_ae(compose(h.dissipative, compose(h.finite, h.infinite)), T));
            bool disj = true;
            std::vector<IntervalSet> sup;
            for (auto* p : parts) sup.push_back(support(*p));
            IntervalSet all = union_all(sup, &disj);
            ch.add("supports_partition_support", disj && set_equal(all, support(T)));
            certify(b, T, classify(T, budget_));
            for (int i = 0; i < 3; ++i) {
                ojson p;
                p["map"] = to_json(*parts[i]);
                p["support"] = to_json(sup[i]);
                p["measure"] = to_json(sup[i].measure());
                b.result[names[i]] = p;
            }
            plot_set(b.plot, sup[0], kind_name(Kind::Dissipative));
            plot_set(b.plot, sup[1], kind_name(Kind::Periodic));
            plot_set(b.plot, sup[2], kind_name(Kind::Aperiodic));
            return b;
        }
        if (o == "induce") {
            arity(2, 2);
            PMap T = map_arg(0);
            IntervalSet A = set_arg(1);
            Induced ind = induce(T, A, budget_);
            std::vector<IntervalSet> cells, tower;
            ExtMeasure kac = ExtMeasure::fin(Scalar(0));
            long maxn = 0;
            ojson parts = ojson::array();
            for (auto& [An, n] : ind.parts) {
                cells.push_back(An);
                maxn = std::max(maxn, n);
                ExtMeasure m = An.measure();
                kac = kac + (m.infinite ? m : ExtMeasure::fin(Scalar(n) * m.value));
                IntervalSet cur = An;
                for (long j = 0; j < n; ++j) {
                    tower.push_back(cur);
                    cur = image(T, cur);
                }
                ojson p;
                p["return_time"] = n;
                p["set"] = to_json(An);
                p["measure"] = to_json(m);
                parts.push_back(p);
            }
            bool cells_disj = true, tower_disj = true;
            ch.add("cells_partition_A", set_equal(union_all(cells, &cells_disj), A) && cells_disj);
            IntervalSet sat = union_all(tower, &tower_disj);
            ch.add("kac", tower_disj && kac == sat.measure(), ojson{{"sum_n_measure", kac.str()}, {"saturation", sat.measure().str()}});
            ch.add("saturation_invariant", set_equal(image(T, sat), sat));
            ch.add("pointwise_returns", pointwise([&](const Scalar& x) {
                if (!A.contains(x)) return true;
                Scalar y = apply(T, x);
                for (long n = 1; n < maxn && !A.contains(y); ++n) y = apply(T, y);
                return A.contains(y) && apply(ind.map, x) == y;
            }));
            b.result["map"] = to_json(ind.map);
            b.result["parts"] = parts;
            return b;
        }
        if (o == "rokhlin") {
            arity(1, 1);
            PMap T = map_arg(0);
            Scalar e = eps();
            Marker m = rokhlin_marker(T, e, budget_);
            ExtMeasure mc = m.set.measure();
            IntervalSet S = support(T);
            ch.add("measure_below_eps", !mc.infinite && mc.value < e, ojson{{"measure", mc.str()}});
            ch.add("inside_support", subset(m.set, S));
            Induced ind = induce(T, m.set, budget_);
            std::vector<IntervalSet> tower;
            for (auto& [An, n] : ind.parts) {
                IntervalSet cur = An;
                for (long j = 0; j < n; ++j) {
                    tower.push_back(cur);
                    cur = image(T, cur);
                }
            }
            ch.add("meets_every_orbit", set_equal(union_all(tower), S));
            b.result["set"] = to_json(m.set);
            b.certificates.push_back(m.certificate);
            return b;
        }
        if (o == "factor") {
            arity(2, 2);
            PMap T = map_arg(0);
            IntervalSet D = set_arg(1);
            Scalar e = eps();
            Factorization f = factor_split(T, D, e, budget_);
            for (auto& [name, ok] : verify_factorization(T, D, e, f)) ch.add(name, ok);
            b.result["t1"] = to_json(f.t1);
            b.result["t2"] = to_json(f.t2);
            b.result["teps"] = to_json(f.teps);
            b.result["teps_support_measure"] = to_json(support(f.teps).measure());
            return b;
        }
        if (o == "skyscraper") {
            arity(2, 2);
            PMap T = map_arg(0);
            long levels = long_arg(1);
            PMap R = skyscraper_approx(T, levels, budget_);
            IntervalSet sR = support(R);
            ch.add("finite_support", sR.bounded());
            ch.add("inside_support", subset(sR, support(T)));
            ch.add("invariant_support", set_equal(image(R, sR), sR));
            ch.add("pointwise", pointwise([&](const Scalar& x) { return apply(R, x) == (sR.contains(x) ? apply(T, x) : x); }));
            b.result["map"] = to_json(R);
            b.result["d_mu"] = d_mu(R, T).str();
            return b;
        }
        if (o == "truncate") {
            arity(2, 2);
            PMap U = map_arg(0);
            IntervalSet X = set_arg(1);
            PMap R = truncate_support(U, X);
            ch.add("involution", involutive(R));
            ch.add("support_inside", subset(support(R), set_intersect(X, support(U))));
            ch.add("pointwise", pointwise([&](const Scalar& x) {
                Scalar y = apply(U, x);
                return apply(R, x) == (X.contains(x) && X.contains(y) ? y : x);
            }));
            Scalar d = d_mu(R, U);
            Scalar bound = mu(complement(X)) + mu(complement(image(U, X)));
            ch.add("d_mu_bound", !(bound < d), ojson{{"d_mu", d.str()}, {"bound", bound.str()}});
            b.result["map"] = to_json(R);
            b.result["d_mu"] = d.str();
            return b;
        }
        throw Error("USAGE_ERROR", "unknown analysis \"" + o + "\"");
    }
};

std::string tsv_escape(const ojson& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

void flatten(const ojson& j, const std::string& path, std::ostringstream& os) {
    if (j.is_object()) {
        for (auto& [k, v] : j.items()) flatten(v, path.empty() ? k : path + "." + k, os);
    } else if (j.is_array() && !j.empty()) {
        for (size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "." + std::to_string(i), os);
    } else {
        os << path << '\t' << tsv_escape(j) << '\n';
    }
}

Outcome error_outcome(const ojson& op, const std::string& code, const std::string& msg,
                      const std::optional<std::pair<std::string, std::string>>& witness, int exit_code) {
    ojson e;
    e["code"] = code;
    e["message"] = msg;
    if (witness) e["witness"] = ojson::array({witness->first, witness->second});
    ojson rep;
    if (!op.is_null()) rep["operation"] = op;
    rep["error"] = e;
    return {exit_code, rep.dump(2) + "\n", "ergokit: " + code + ": " + msg + "\n"};
}

ojson request_echo(const Request& req) {
    ojson o;
    o["command"] = req.command;
    o["op"] = req.op;
    o["args"] = req.args;
    return o;
}

}  // namespace

ojson Workspace::to_json() const {
    ojson j;
    j["field"] = ojson{{"d", d}};
    if (budget || weak_truncation) {
        ojson o = ojson::object();
        if (budget) o["budget"] = *budget;
        if (weak_truncation) o["weak_truncation"] = *weak_truncation;
        j["options"] = o;
    }
    ojson s = ojson::object(), m = ojson::object(), p = ojson::object();
    for (auto& [n, v] : sets) s[n] = ergokit::to_json(v);
    for (auto& [n, v] : maps) m[n] = ergokit::to_json(v);
    for (auto& [n, v] : partials) p[n] = ergokit::to_json(v);
    j["sets"] = s;
    j["maps"] = m;
    j["partials"] = p;
    return j;
}

Workspace parse_workspace(const ojson& j) {
    if (!j.is_object()) throw Error("PARSE_ERROR", "workspace: expected an object");
    for (auto& [k, v] : j.items()) {
        (void)v;
        if (k != "field" && k != "options" && k != "sets" && k != "maps" && k != "partials")
            throw Error("PARSE_ERROR", "workspace: unexpected key \"" + k + "\"");
    }
    Workspace ws;
    if (!j.contains("field")) throw Error("PARSE_ERROR", "workspace: expected key \"field\"");
    const ojson& f = object_at(j, "field");
    if (!f.contains("d") || !f.at("d").is_number_integer()) throw Error("PARSE_ERROR", "field.d: expected an integer");
    ws.d = f.at("d").get<long>();
    Scalar::set_field(ws.d);
    if (j.contains("options")) {
        const ojson& o = object_at(j, "options");
        for (auto& [k, v] : o.items()) {
            (void)v;
            if (k != "budget" && k != "weak_truncation") throw Error("PARSE_ERROR", "options: unexpected key \"" + k + "\"");
        }
        ws.budget = option_long(o, "budget");
        ws.weak_truncation = option_long(o, "weak_truncation");
    }
    std::set<std::string> seen;
    if (j.contains("sets"))
        for (auto& [n, v] : object_at(j, "sets").items()) {
            check_name(n, seen, "sets");
            ws.sets[n] = set_from_json(v, "sets." + n);
        }
    if (j.contains("maps"))
        for (auto& [n, v] : object_at(j, "maps").items()) {
            check_name(n, seen, "maps");
            PMap raw = map_from_json(v, "maps." + n);
            ws.maps[n] = validated("map \"" + n + "\"", [&] { return validate_bijection(raw); });
        }
    if (j.contains("partials"))
        for (auto& [n, v] : object_at(j, "partials").items()) {
            check_name(n, seen, "partials");
            std::string w = "partials." + n;
            if (!v.is_object() || !v.contains("map") || !v.contains("dom") || !v.contains("rng"))
                throw Error("PARSE_ERROR", w + ": expected keys \"map\", \"dom\" and \"rng\"");
            PartialIso p{map_from_json(v.at("map"), w + ".map"), set_from_json(v.at("dom"), w + ".dom"),
                         set_from_json(v.at("rng"), w + ".rng")};
            validated("partial \"" + n + "\"", [&] {
                check_partial(p.map, p.dom, p.rng);
                return 0;
            });
            ws.partials[n] = p;
        }
    return ws;
}

Workspace parse_workspace_text(const std::string& text) {
    ojson j;
    try {
        j = ojson::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error("PARSE_ERROR", std::string("workspace JSON: ") + e.what());
    }
    return parse_workspace(j);
}

Workspace load_workspace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("PARSE_ERROR", "cannot read workspace file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_workspace_text(ss.str());
}

int exit_code_for(const std::string& code) {
    static const std::set<std::string> out_of_class = {"OUT_OF_CLASS",           "UNSUPPORTED_APERIODIC",
                                                       "COMPOSITION_OUT_OF_CLASS", "INCOMMENSURABLE_PERIODS",
                                                       "CLASSIFICATION_INCOMPLETE", "INFINITE_SUPPORT"};
    if (code == "BUDGET_EXHAUSTED") return 3;
    if (out_of_class.count(code)) return 4;
    if (code == "VERIFICATION_FAILED") return 5;
    if (code == "INTERNAL_ERROR") return 1;
    return 2;
}

Outcome run_command(const Workspace& ws, const Request& req) {
    ojson op = request_echo(req);
    try {
        Runner r(ws, req);
        op = r.echo();
        Built b = r.run();
        ojson rep;
        rep["operation"] = op;
        if (!b.checks.all) {
            rep["verification"] = b.checks.list;
            rep["error"] = ojson{{"code", "VERIFICATION_FAILED"}, {"message", "a re-check of the result failed"}};
            rep["verified"] = false;
            return {5, rep.dump(2) + "\n", "ergokit: verification failed\n"};
        }
        for (auto& [k, v] : b.head.items()) rep[k] = v;
        if (!b.result.is_null()) rep["result"] = b.result;
        rep["verification"] = b.checks.list;
        rep["certificates"] = b.certificates;
        rep["verified"] = true;
        Outcome out;
        if (req.plot) {
            std::ostringstream os;
            for (auto& row : b.plot) os << row.lo.str() << '\t' << row.hi.str() << '\t' << row.kind << '\n';
            out.out = os.str();
        } else if (req.out == "tsv") {
            std::ostringstream os;
            ojson body = rep;
            body.erase("operation");
            flatten(body, "", os);
            out.out = os.str();
        } else {
            out.out = rep.dump(2) + "\n";
        }
        return out;
    } catch (const Error& e) {
        return error_outcome(op, e.code(), e.message(), e.witness(), exit_code_for(e.code()));
    } catch (const std::exception& e) {
        return error_outcome(op, "INTERNAL_ERROR", e.what(), std::nullopt, 1);
    }
}

Outcome run_text(const std::string& text, const Request& req) {
    try {
        Workspace ws = parse_workspace_text(text);
        return run_command(ws, req);
    } catch (const Error& e) {
        return error_outcome(request_echo(req), e.code(), e.message(), e.witness(), exit_code_for(e.code()));
    }
}

Outcome run_file(const std::string& path, const Request& req) {
    try {
        Workspace ws = load_workspace(path);
        return run_command(ws, req);
    } catch (const Error& e) {
        return error_outcome(request_echo(req), e.code(), e.message(), e.witness(), exit_code_for(e.code()));
    }
}

}  // namespace ergokit
