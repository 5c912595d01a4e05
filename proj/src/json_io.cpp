#include "ergokit/json_io.hpp"

#include "ergokit/error.hpp"

namespace ergokit {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    throw Error("PARSE_ERROR", where + ": expected " + what);
}

const ojson& field(const ojson& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) bad(where, std::string("key \"") + key + "\"");
    return j.at(key);
}

ojson pair_json(const Scalar& a, const Scalar& b) { return ojson::array({a.str(), b.str()}); }

Interval interval_from_json(const ojson& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2) bad(where, "[lo, hi]");
    Interval iv{scalar_from_json(j[0], where + "[0]"), scalar_from_json(j[1], where + "[1]")};
    if (!(iv.lo < iv.hi)) bad(where, "lo < hi");
    return iv;
}

std::optional<Tail> tail_from_json(const ojson& j, const std::string& where) {
    if (j.is_null()) return std::nullopt;
    Tail t;
    t.start = scalar_from_json(field(j, "start", where), where + ".start");
    t.period = scalar_from_json(field(j, "period", where), where + ".period");
    if (t.period.sign() <= 0) bad(where + ".period", "a positive period");
    const ojson& pat = field(j, "pattern", where);
    if (!pat.is_array()) bad(where + ".pattern", "an array");
    for (size_t i = 0; i < pat.size(); ++i) t.pattern.push_back(interval_from_json(pat[i], where + ".pattern[" + std::to_string(i) + "]"));
    return t;
}

ojson tail_json(const std::optional<Tail>& t) {
    if (!t) return nullptr;
    ojson pat = ojson::array();
    for (auto& i : t->pattern) pat.push_back(pair_json(i.lo, i.hi));
    ojson j;
    j["start"] = t->start.str();
    j["period"] = t->period.str();
    j["pattern"] = pat;
    return j;
}

long small_int(const ojson& j, const std::string& where, long lo) {
    if (!j.is_number_integer() || j.get<long>() < lo) bad(where, "an integer >= " + std::to_string(lo));
    return j.get<long>();
}

}  // namespace

ojson to_json(const Scalar& x) { return x.str(); }

ojson to_json(const ExtMeasure& m) { return m.str(); }

ojson to_json(const IntervalSet& s0) {
    IntervalSet s = s0.canonical();
    ojson core = ojson::array();
    for (auto& i : s.core) core.push_back(pair_json(i.lo, i.hi));
    ojson j;
    j["core"] = core;
    j["right_tail"] = tail_json(s.right);
    j["left_tail"] = tail_json(s.left);
    return j;
}

ojson to_json(const PMap& T0) {
    // re-normalize so the encoding does not depend on how T was built
    PMap T = PMap::from_pieces(T0.pieces());
    ojson core = ojson::array();
    for (auto& p : T.nf.core) {
        ojson c;
        c["domain"] = pair_json(p.dom.lo, p.dom.hi);
        c["shift"] = p.shift.str();
        core.push_back(c);
    }
    ojson fams = ojson::array();
    auto side = [&](const std::optional<SideForm>& sf, const char* name) {
        if (!sf) return;
        for (auto& f : sf->fam) {
            ojson j;
            j["side"] = name;
            j["start"] = sf->start.str();
            j["period"] = sf->period.str();
            j["modulus"] = 1;
            j["residue"] = 0;
            j["pattern"] = pair_json(f.u, f.v);
            j["shift_const"] = f.c.str();
            j["shift_slope"] = f.slope.str();
            fams.push_back(j);
        }
    };
    side(T.nf.right, "right");
    side(T.nf.left, "left");
    ojson j;
    j["core"] = core;
    j["families"] = fams;
    return j;
}

ojson to_json(const PartialIso& phi) {
    ojson j;
    j["map"] = to_json(phi.map);
    j["dom"] = to_json(phi.dom);
    j["rng"] = to_json(phi.rng);
    return j;
}

Scalar scalar_from_json(const ojson& j, const std::string& where) {
    if (j.is_number_integer()) return Scalar(j.get<long>());
    if (!j.is_string()) bad(where, "a scalar string");
    try {
        return Scalar::parse(j.get<std::string>());
    } catch (const Error& e) {
        if (e.code() == "FIELD_MISMATCH") throw;
        bad(where, "a scalar like p/q or p/q+r/s*rt(d), got \"" + j.get<std::string>() + "\"");
    }
}

IntervalSet set_from_json(const ojson& j, const std::string& where) {
    if (!j.is_object()) bad(where, "an interval set object");
    IntervalSet s;
    if (j.contains("core")) {
        const ojson& c = j.at("core");
        if (!c.is_array()) bad(where + ".core", "an array");
        for (size_t i = 0; i < c.size(); ++i) s.core.push_back(interval_from_json(c[i], where + ".core[" + std::to_string(i) + "]"));
    }
    if (j.contains("right_tail")) s.right = tail_from_json(j.at("right_tail"), where + ".right_tail");
    if (j.contains("left_tail")) s.left = tail_from_json(j.at("left_tail"), where + ".left_tail");
    return s.canonical();
}

PMap map_from_json(const ojson& j, const std::string& where) {
    if (!j.is_object()) bad(where, "a map object");
    std::vector<Piece> ps;
    std::vector<IntervalSet> doms;
    if (j.contains("core")) {
        const ojson& c = j.at("core");
        if (!c.is_array()) bad(where + ".core", "an array");
        for (size_t i = 0; i < c.size(); ++i) {
            std::string w = where + ".core[" + std::to_string(i) + "]";
            Interval d = interval_from_json(field(c[i], "domain", w), w + ".domain");
            ps.push_back({d, Scalar(0), scalar_from_json(field(c[i], "shift", w), w + ".shift"), Scalar(0)});
            doms.push_back(IntervalSet::interval(d.lo, d.hi));
        }
    }
    if (j.contains("families")) {
        const ojson& f = j.at("families");
        if (!f.is_array()) bad(where + ".families", "an array");
        for (size_t i = 0; i < f.size(); ++i) {
            std::string w = where + ".families[" + std::to_string(i) + "]";
            const ojson& sd = field(f[i], "side", w);
            if (!sd.is_string() || (sd != "left" && sd != "right")) bad(w + ".side", "\"left\" or \"right\"");
            bool right = sd == "right";
            Scalar start = scalar_from_json(field(f[i], "start", w), w + ".start");
            Scalar p = scalar_from_json(field(f[i], "period", w), w + ".period");
            if (p.sign() <= 0) bad(w + ".period", "a positive period");
            long q = f[i].contains("modulus") ? small_int(f[i].at("modulus"), w + ".modulus", 1) : 1;
            long r = f[i].contains("residue") ? small_int(f[i].at("residue"), w + ".residue", 0) : 0;
            if (r >= q) bad(w + ".residue", "a residue below the modulus");
            Interval pat = interval_from_json(field(f[i], "pattern", w), w + ".pattern");
            if (pat.lo.sign() < 0 || p < pat.hi) bad(w + ".pattern", "an interval inside [0, period)");
            Scalar a = scalar_from_json(field(f[i], "shift_const", w), w + ".shift_const");
            Scalar b = f[i].contains("shift_slope") ? scalar_from_json(f[i].at("shift_slope"), w + ".shift_slope") : Scalar(0);
            Scalar base = right ? start + Scalar(r) * p : start - Scalar(r + 1) * p;
            Scalar step = right ? Scalar(q) * p : -(Scalar(q) * p);
            Interval d{base + pat.lo, base + pat.hi};
            ps.push_back({d, step, a + Scalar(r) * b, Scalar(q) * b});
            doms.push_back(IntervalSet::of_prog({d, step}));
        }
    }
    if (j.contains("elsewhere")) {
        if (j.at("elsewhere") != "identity") bad(where + ".elsewhere", "\"identity\"");
        for (auto& p : complement(union_all(doms)).progressions()) ps.push_back({p.I, p.step, Scalar(0), Scalar(0)});
    }
    return PMap::from_pieces(ps);
}

}  // namespace ergokit
