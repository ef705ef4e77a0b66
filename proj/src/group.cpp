#include "wpc/group.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

namespace wpc {

namespace {

// Letters 0..2g-1 are the generators, 2g..4g-1 their inverses.
std::vector<DiskAutomorphism> letter_table(const GroupPresentation& p) {
    std::vector<DiskAutomorphism> letters;
    letters.reserve(2 * p.generators.size());
    for (const auto& g : p.generators) letters.push_back(g);
    for (const auto& g : p.generators) letters.push_back(inverse(g));
    return letters;
}

std::size_t inverse_letter(std::size_t s, std::size_t ngen) {
    return s < ngen ? s + ngen : s - ngen;
}

DiskAutomorphism word_product(const GroupPresentation& p, const std::vector<int>& word) {
    DiskAutomorphism m = identity_automorphism();
    for (int s : word) {
        if (s == 0 || std::abs(s) > static_cast<int>(p.generators.size())) {
            throw std::invalid_argument("relator index out of range");
        }
        const auto& g = p.generators[static_cast<std::size_t>(std::abs(s) - 1)];
        m = compose(m, s > 0 ? g : inverse(g));
    }
    return m;
}

// Deduplication key: the translate g(0) = b/conj(a) together with the
// rotation part u = a^2/|a|^2. Both are bounded and matrix-sign invariant,
// unlike the raw entries which grow like e^(d/2) and lose absolute precision.
struct DedupKey {
    double v[4];
};

DedupKey dedup_key(const DiskAutomorphism& t) {
    const complexd z = t.b / std::conj(t.a);
    const complexd u = (t.a * t.a) / std::norm(t.a);
    return DedupKey{{z.real(), z.imag(), u.real(), u.imag()}};
}

double key_distance(const DedupKey& x, const DedupKey& y) {
    double d = 0.0;
    for (int i = 0; i < 4; ++i) d += std::abs(x.v[i] - y.v[i]);
    return d;
}

constexpr double kCellSize = 2e-10;
constexpr double kDuplicateThreshold = 5e-11;  // noise ~1e-13 << this << element separation

std::uint64_t mixcell(std::uint64_t x) {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    return x;
}

std::uint64_t cell_hash(const std::int64_t c[4]) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (int i = 0; i < 4; ++i) {
        h ^= mixcell(static_cast<std::uint64_t>(c[i]) + 0x9e3779b97f4a7c15ULL * (i + 1));
        h *= 0x100000001b3ULL;
    }
    return mixcell(h);
}

// Spatial hash from cell coordinates to chains of element indices.
class DedupIndex {
  public:
    explicit DedupIndex(const std::vector<DiskAutomorphism>* elements) : elements_(elements) {}

    // Returns false when a stored element within kDuplicateThreshold exists.
    bool insert_if_new(const DiskAutomorphism& t, std::uint32_t index) {
        const DedupKey k = dedup_key(t);
        // probe the 16 corner cells of the threshold box around k
        std::int64_t base[4], alt[4];
        for (int i = 0; i < 4; ++i) {
            base[i] = static_cast<std::int64_t>(std::floor((k.v[i] - 0.5 * kCellSize) / kCellSize));
            alt[i] = static_cast<std::int64_t>(std::floor((k.v[i] + 0.5 * kCellSize) / kCellSize));
        }
        std::int64_t c[4];
        for (int m = 0; m < 16; ++m) {
            for (int i = 0; i < 4; ++i) c[i] = (m >> i) & 1 ? alt[i] : base[i];
            auto it = map_.find(cell_hash(c));
            if (it == map_.end()) continue;
            for (std::uint32_t j = it->second; j != kNone; j = chain_[j]) {
                if (key_distance(k, dedup_key((*elements_)[j])) < kDuplicateThreshold) return false;
            }
        }
        std::int64_t own[4];
        for (int i = 0; i < 4; ++i) own[i] = static_cast<std::int64_t>(std::floor(k.v[i] / kCellSize));
        const std::uint64_t h = cell_hash(own);
        if (chain_.size() <= index) chain_.resize(index + 1, kNone);
        auto [it, fresh] = map_.try_emplace(h, index);
        if (!fresh) {
            chain_[index] = it->second;
            it->second = index;
        }
        return true;
    }

  private:
    static constexpr std::uint32_t kNone = 0xffffffffu;
    const std::vector<DiskAutomorphism>* elements_;
    std::unordered_map<std::uint64_t, std::uint32_t> map_;
    std::vector<std::uint32_t> chain_;
};

DomainFace face_for(const DiskAutomorphism& g, std::uint32_t index) {
    const complexd w = wpc::apply(g, complexd{0.0, 0.0});
    const complexd wk = to_klein(w);
    const double n2 = std::norm(wk);
    // half-space x . wk <= 1 - sqrt(1 - |wk|^2)  (equidistance from 0 and w)
    return DomainFace{wk.real(), wk.imag(), 1.0 - std::sqrt(std::max(0.0, 1.0 - n2)), index};
}

// Circumradius of the convex Klein polygon cut out by the faces: the maximum
// distance from 0 to a feasible pairwise intersection of face boundaries.
double polygon_circumradius(const std::vector<DomainFace>& faces) {
    double best = 0.0;
    const std::size_t n = faces.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const DomainFace& f = faces[i];
            const DomainFace& g = faces[j];
            const double det = f.nx * g.ny - f.ny * g.nx;
            if (std::abs(det) < 1e-13) continue;
            const double x = (f.offset * g.ny - g.offset * f.ny) / det;
            const double y = (f.nx * g.offset - g.nx * f.offset) / det;
            const double r2 = x * x + y * y;
            if (r2 >= 1.0) continue;
            bool feasible = true;
            for (const DomainFace& h : faces) {
                if (x * h.nx + y * h.ny > h.offset + 1e-12) { feasible = false; break; }
            }
            if (!feasible) continue;
            best = std::max(best, std::acosh(1.0 / std::sqrt(1.0 - r2)));
        }
    }
    return best;
}

void build_domain_geometry(GroupEnumeration& e) {
    if (e.trivial()) {
        e.membership_cap = 0.0;
        e.circumradius = std::numeric_limits<double>::infinity();
        e.inradius = std::numeric_limits<double>::infinity();
        e.domain_exact = true;
        return;
    }
    double min_disp = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < e.size(); ++i) min_disp = std::min(min_disp, e.displacements[i]);
    e.inradius = 0.5 * min_disp;

    // deepest shell's minimum displacement limits how far the ball is saturated
    double deepest_min = std::numeric_limits<double>::infinity();
    const std::size_t last = e.level_offsets.size() - 2;
    for (std::size_t i = e.level_offsets[last]; i < e.level_offsets[last + 1]; ++i) {
        deepest_min = std::min(deepest_min, e.displacements[i]);
    }

    double max_gen_disp = 0.0;
    for (std::size_t i = 1; i < e.size() && e.word_length[i] == 1; ++i) {
        max_gen_disp = std::max(max_gen_disp, e.displacements[i]);
    }

    const double margin = 0.2;
    double cap = 2.0 * max_gen_disp + margin;
    for (int iter = 0; iter < 8; ++iter) {
        e.near_faces.clear();
        for (std::size_t i = 1; i < e.size(); ++i) {
            if (e.displacements[i] <= cap) {
                e.near_faces.push_back(face_for(e.elements[i], static_cast<std::uint32_t>(i)));
            }
        }
        const double r = polygon_circumradius(e.near_faces);
        if (r <= 0.0) { cap += max_gen_disp; continue; }
        e.circumradius = r;
        if (2.0 * r + margin <= cap) break;
        cap = 2.0 * r + margin + 0.5;
    }
    e.membership_cap = cap;
    e.domain_exact = cap <= deepest_min;

    const double dist_cap = 4.0 * e.circumradius + margin;
    for (std::size_t i = 1; i < e.size(); ++i) {
        if (e.displacements[i] <= dist_cap) e.distance_elements.push_back(static_cast<std::uint32_t>(i));
    }
}

}  // namespace

double relator_residual(const GroupPresentation& p) {
    if (p.trivial()) return 0.0;
    const DiskAutomorphism m = word_product(p, p.relator);
    const auto dev = [](complexd a, complexd b, double sign) {
        return std::max(std::abs(a - sign), std::abs(b));
    };
    return std::min(dev(m.a, m.b, 1.0), dev(m.a, m.b, -1.0));
}

void validate(const GroupPresentation& p) {
    if (p.trivial()) {
        if (p.genus != 0 || !p.relator.empty()) {
            throw std::invalid_argument("trivial presentation must have genus 0 and no relator");
        }
        return;
    }
    if (p.genus < 2) throw std::invalid_argument("genus must be >= 2 (or 0 for the trivial group)");
    if (p.generators.size() != static_cast<std::size_t>(2 * p.genus)) {
        throw std::invalid_argument("expected 2*genus generators");
    }
    for (std::size_t i = 0; i < p.generators.size(); ++i) {
        const auto& g = p.generators[i];
        const double det = std::norm(g.a) - std::norm(g.b);
        if (std::abs(det - 1.0) > 1e-9) {
            throw std::invalid_argument("generator " + std::to_string(i + 1) + " is not normalized");
        }
        if (!is_hyperbolic(g)) {
            throw std::invalid_argument("generator " + std::to_string(i + 1) +
                                        " is not hyperbolic (|trace| <= 2)");
        }
    }
    if (p.relator.empty()) throw std::invalid_argument("missing relator");
    const double res = relator_residual(p);
    if (!(res <= p.relator_tolerance)) {
        std::ostringstream os;
        os << "relator residual " << res << " exceeds tolerance " << p.relator_tolerance;
        throw std::invalid_argument(os.str());
    }
}

GroupPresentation build_octagon_group() {
    GroupPresentation p;
    p.genus = 2;
    // translation length 2 arccosh(1 + sqrt(2)) along directions k pi/4
    const double ca = 1.0 + std::sqrt(2.0);            // cosh(l/2)
    const double sa = std::sqrt(2.0 + 2.0 * std::sqrt(2.0));  // sinh(l/2)
    for (int k = 0; k < 4; ++k) {
        const complexd dir = std::polar(1.0, k * M_PI / 4.0);
        p.generators.push_back(DiskAutomorphism{complexd{ca, 0.0}, dir * sa});
    }
    p.relator = {1, -2, 3, -4, -1, 2, -3, 4};
    validate(p);
    return p;
}

GroupEnumeration enumerate_group(const GroupPresentation& p, int max_word_length,
                                 const EnumerationOptions& opts) {
    validate(p);
    if (max_word_length < 0) throw std::invalid_argument("max_word_length must be >= 0");

    GroupEnumeration e;
    e.presentation = p;
    e.max_word_length = max_word_length;
    e.elements.push_back(identity_automorphism());
    e.word_length.push_back(0);
    e.displacements.push_back(0.0);
    e.level_offsets = {0, 1};

    if (!p.trivial() && max_word_length > 0) {
        const auto letters = letter_table(p);
        const std::size_t ngen = p.generators.size();
        DedupIndex dedup(&e.elements);
        dedup.insert_if_new(e.elements[0], 0);

        std::vector<std::uint8_t> last_letter{0xff};
        std::size_t frontier_begin = 0, frontier_end = 1;
        for (int lev = 1; lev <= max_word_length; ++lev) {
            for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
                for (std::size_t s = 0; s < letters.size(); ++s) {
                    if (last_letter[i] != 0xff && s == inverse_letter(last_letter[i], ngen)) continue;
                    const DiskAutomorphism cand = compose(e.elements[i], letters[s]);
                    const auto index = static_cast<std::uint32_t>(e.elements.size());
                    e.elements.push_back(cand);
                    if (!dedup.insert_if_new(cand, index)) {
                        e.elements.pop_back();
                        continue;
                    }
                    e.word_length.push_back(static_cast<std::uint8_t>(lev));
                    e.displacements.push_back(displacement(cand));
                    last_letter.push_back(static_cast<std::uint8_t>(s));
                    if (e.elements.size() > opts.max_elements) {
                        throw resource_error("enumeration exceeds max_elements cap");
                    }
                }
            }
            frontier_begin = frontier_end;
            frontier_end = e.elements.size();
            e.level_offsets.push_back(frontier_end);
            if (frontier_begin == frontier_end) break;  // group exhausted
        }
        while (e.level_offsets.size() < static_cast<std::size_t>(max_word_length) + 2) {
            e.level_offsets.push_back(e.elements.size());
        }
    }

    build_domain_geometry(e);
    return e;
}

GroupEnumeration truncate_enumeration(const GroupEnumeration& e, int L) {
    if (L < 0 || L > e.max_word_length) throw std::invalid_argument("bad truncation level");
    GroupEnumeration out;
    out.presentation = e.presentation;
    out.max_word_length = L;
    const std::size_t n = e.level_offsets[static_cast<std::size_t>(L) + 1];
    out.elements.assign(e.elements.begin(), e.elements.begin() + n);
    out.word_length.assign(e.word_length.begin(), e.word_length.begin() + n);
    out.displacements.assign(e.displacements.begin(), e.displacements.begin() + n);
    out.level_offsets.assign(e.level_offsets.begin(), e.level_offsets.begin() + L + 2);
    build_domain_geometry(out);
    return out;
}

bool in_domain(const GroupEnumeration& e, complexd z, double slack) {
    const complexd x = to_klein(z);
    for (const DomainFace& f : e.near_faces) {
        if (x.real() * f.nx + x.imag() * f.ny > f.offset + slack) return false;
    }
    return true;
}

SurfacePoint reduce_to_domain(const GroupEnumeration& e, complexd z) {
    DiskPoint p = disk_point(z);
    if (e.trivial()) return SurfacePoint{p};
    for (int iter = 0; iter < 1000; ++iter) {
        if (in_domain(e, p.z)) return SurfacePoint{p};
        double best = std::abs(p.z);
        std::size_t best_index = 0;
        for (const DomainFace& f : e.near_faces) {
            const double r = std::abs(wpc::apply(e.elements[f.element], p.z));
            if (r < best - 1e-15) { best = r; best_index = f.element; }
        }
        if (best_index == 0) return SurfacePoint{p};  // no strict improvement left
        p = wpc::apply(e.elements[best_index], p);
    }
    throw resource_error("reduce_to_domain: no convergence (enumeration too shallow)");
}

double surface_distance(const GroupEnumeration& e, const SurfacePoint& p, const SurfacePoint& q) {
    double best = hyperbolic_distance(p.lift, q.lift);
    for (std::uint32_t i : e.distance_elements) {
        best = std::min(best, hyperbolic_distance(p.lift.z, wpc::apply(e.elements[i], q.lift.z)));
    }
    return best;
}

double injectivity_radius(const GroupEnumeration& e, const SurfacePoint& p) {
    if (e.trivial()) return std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    for (std::uint32_t i : e.distance_elements) {
        best = std::min(best, hyperbolic_distance(p.lift.z, wpc::apply(e.elements[i], p.lift.z)));
    }
    return 0.5 * best;
}

double systole_estimate(const GroupEnumeration& e) {
    if (e.trivial()) throw std::invalid_argument("systole of the trivial group is undefined");
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < e.size(); ++i) {
        if (is_hyperbolic(e.elements[i])) {
            best = std::min(best, translation_length(e.elements[i]));
        }
    }
    return best;
}

std::vector<std::size_t> level_counts(const GroupEnumeration& e) {
    std::vector<std::size_t> counts;
    for (std::size_t l = 0; l + 1 < e.level_offsets.size(); ++l) {
        counts.push_back(e.level_offsets[l + 1] - e.level_offsets[l]);
    }
    return counts;
}

namespace {

complexd json_complex(const nlohmann::json& a) {
    if (!a.is_array() || a.size() != 2) throw std::invalid_argument("expected [re, im]");
    return complexd{a[0].get<double>(), a[1].get<double>()};
}

}  // namespace

GroupPresentation load_presentation(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open surface config: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& ex) {
        throw std::invalid_argument(std::string("surface config is not valid JSON: ") + ex.what());
    }
    GroupPresentation p;
    try {
        p.genus = j.at("genus").get<int>();
        for (const auto& row : j.at("generators")) {
            if (!row.is_array() || row.size() != 2) {
                throw std::invalid_argument("generator must be [[re,im],[re,im]]");
            }
            p.generators.push_back(normalized(json_complex(row[0]), json_complex(row[1])));
        }
        p.relator = j.value("relator", std::vector<int>{});
        p.relator_tolerance = j.value("relator_tolerance", 1e-9);
        p.dedup_tolerance = j.value("dedup_tolerance", 1e-9);
        p.max_word_length = j.value("max_word_length", 6);
    } catch (const nlohmann::json::exception& ex) {
        throw std::invalid_argument(std::string("surface config schema error: ") + ex.what());
    }
    validate(p);
    return p;
}

std::string presentation_to_json(const GroupPresentation& p) {
    nlohmann::json j;
    j["genus"] = p.genus;
    auto& gens = j["generators"] = nlohmann::json::array();
    for (const auto& g : p.generators) {
        gens.push_back({{g.a.real(), g.a.imag()}, {g.b.real(), g.b.imag()}});
    }
    j["relator"] = p.relator;
    j["relator_tolerance"] = p.relator_tolerance;
    j["dedup_tolerance"] = p.dedup_tolerance;
    j["max_word_length"] = p.max_word_length;
    return j.dump(2);
}

}  // namespace wpc
