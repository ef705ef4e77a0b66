#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wpc/disk.hpp"

// Cocompact surface groups: finite presentations, breadth-first word
// enumeration with numeric deduplication, Dirichlet fundamental domain
// queries, surface distances and injectivity radii.

namespace wpc {

struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// genus >= 2 with 2*genus generators and one relator (a signed, 1-based index
// word: k means generator k, -k its inverse). genus == 0 with no generators is
// accepted as the trivial "pseudo-surface" used for closed-form checks.
struct GroupPresentation {
    int genus = 0;
    std::vector<DiskAutomorphism> generators;
    std::vector<int> relator;
    double relator_tolerance = 1e-9;
    double dedup_tolerance = 1e-9;
    int max_word_length = 6;

    bool trivial() const { return generators.empty(); }
};

// Residual of the relator word: min over sign of the max-abs entry difference
// from the identity matrix (elements are only defined up to matrix sign).
double relator_residual(const GroupPresentation& p);

// Throws std::invalid_argument on malformed presentations (wrong generator
// count, non-hyperbolic generator, relator residual above tolerance).
void validate(const GroupPresentation& p);

// The genus-2 group of the regular hyperbolic octagon: generators translate
// by length 2 arccosh(1 + sqrt(2)) along the directions k pi/4, opposite
// directions giving inverse pairs, with the alternating length-8 relator.
GroupPresentation build_octagon_group();

GroupPresentation load_presentation(const std::string& path);
std::string presentation_to_json(const GroupPresentation& p);

struct EnumerationOptions {
    std::size_t max_elements = 20'000'000;
};

// Half-space x . normal <= offset in Klein coordinates; the bisector between
// 0 and element(0) is Euclidean-linear there.
struct DomainFace {
    double nx = 0.0, ny = 0.0, offset = 0.0;
    std::uint32_t element = 0;
};

// Deduplicated group ball of word length <= max_word_length, identity first,
// breadth-first order. Immutable after construction; all queries are pure.
struct GroupEnumeration {
    GroupPresentation presentation;
    int max_word_length = 0;

    std::vector<DiskAutomorphism> elements;  // elements[0] is the identity
    std::vector<std::uint8_t> word_length;
    std::vector<double> displacements;        // dist(0, g(0))
    std::vector<std::size_t> level_offsets;   // word length L lives in [offsets[L], offsets[L+1])

    // Dirichlet domain machinery. near_faces covers every element with
    // displacement <= membership_cap, which makes the membership test exact
    // for points within half the cap of the origin.
    std::vector<DomainFace> near_faces;
    double membership_cap = 0.0;
    std::vector<std::uint32_t> distance_elements;  // for distance/injectivity queries
    double circumradius = 0.0;  // of the Dirichlet polygon (from its Klein vertices)
    double inradius = 0.0;
    bool domain_exact = true;   // false when the enumeration is too shallow to saturate the caps

    std::size_t size() const { return elements.size(); }
    bool trivial() const { return elements.size() <= 1; }
};

GroupEnumeration enumerate_group(const GroupPresentation& p, int max_word_length,
                                 const EnumerationOptions& opts = {});

// Same group ball restricted to word length <= L (L <= e.max_word_length);
// domain machinery is rebuilt for the smaller ball.
GroupEnumeration truncate_enumeration(const GroupEnumeration& e, int L);

// Dirichlet membership relative to the enumerated translates:
// dist(0, z) <= dist(g(0), z) for every near element g.
bool in_domain(const GroupEnumeration& e, complexd z, double slack = 0.0);

struct SurfacePoint {
    DiskPoint lift;
};

// Moves z into the Dirichlet domain by repeatedly applying the enumerated
// element that most decreases dist(0, .). Throws resource_error when the
// iteration cap is hit (enumeration too shallow for such a deep point).
SurfacePoint reduce_to_domain(const GroupEnumeration& e, complexd z);

// min over enumerated g of dist(p, g(q)): an upper bound for the quotient
// distance, exact once the enumeration covers the minimizing element.
double surface_distance(const GroupEnumeration& e, const SurfacePoint& p, const SurfacePoint& q);

// (1/2) min over enumerated g != e of dist(p, g(p)); +inf for the trivial group.
double injectivity_radius(const GroupEnumeration& e, const SurfacePoint& p);

// min over enumerated hyperbolic g != e of the translation length.
double systole_estimate(const GroupEnumeration& e);

std::vector<std::size_t> level_counts(const GroupEnumeration& e);

}  // namespace wpc
