#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <map>
#include <vector>

#include "lerw/estimate.hpp"
#include "lerw/geometry.hpp"

namespace lerw {

/// Site enumeration for a ball domain with O(1) point lookup and a
/// precomputed 6-neighbor table (index -1 marks off-domain neighbors).
class DomainIndex {
public:
    explicit DomainIndex(const BallDomain& domain);

    const BallDomain& domain() const { return domain_; }
    std::size_t size() const { return sites_.size(); }
    const LatticePoint& site(std::size_t i) const { return sites_[i]; }

    /// Site index of p, or -1 when p is outside the domain.
    std::int32_t index_of(const LatticePoint& p) const;

    const std::array<std::int32_t, 6>& neighbors(std::size_t i) const {
        return neighbors_[i];
    }

private:
    BallDomain domain_;
    std::int64_t low_;   // minimum coordinate offset from center
    std::int64_t dim_;   // cells per axis of the lookup cube
    std::vector<std::int32_t> cell_to_site_;
    std::vector<LatticePoint> sites_;
    std::vector<std::array<std::int32_t, 6>> neighbors_;
};

/// One real value per interior site; identically zero off the domain
/// (killed-walk convention).  Immutable after construction, so fields can
/// be shared freely across sampling threads.
class ScalarField {
public:
    ScalarField(std::shared_ptr<const DomainIndex> index, std::vector<double> values);

    const DomainIndex& index() const { return *index_; }
    std::shared_ptr<const DomainIndex> index_ptr() const { return index_; }
    const BallDomain& domain() const { return index_->domain(); }

    double at(const LatticePoint& p) const {
        std::int32_t i = index_->index_of(p);
        return i < 0 ? 0.0 : values_[static_cast<std::size_t>(i)];
    }
    double at_index(std::size_t i) const { return values_[i]; }
    const std::vector<double>& values() const { return values_; }

private:
    std::shared_ptr<const DomainIndex> index_;
    std::vector<double> values_;
};

/// Max-norm residual target and iteration cap of the stencil solver.
inline constexpr double kSolverTolerance = 1e-12;
inline constexpr std::int64_t kSolverIterationCap = 1'000'000;

/// Probability of reaching `target` before leaving the domain, solved as
/// the unique field with h(target) = 1, h = 0 off-domain, and the
/// six-neighbor mean property at every other interior site.
/// Throws std::runtime_error with a residual report on non-convergence.
ScalarField hitting_field(const BallDomain& domain, const LatticePoint& target);
ScalarField hitting_field(std::shared_ptr<const DomainIndex> index,
                          const LatticePoint& target);

/// Expected visit counts G(source, .) of the walk killed on exit.
ScalarField green_function(const BallDomain& domain, const LatticePoint& source);
ScalarField green_function(std::shared_ptr<const DomainIndex> index,
                           const LatticePoint& source);

/// Expected exit time from every site (discrete Poisson equation
/// t = 1 + neighbor mean, zero off-domain).
ScalarField exit_time_field(const BallDomain& domain);
ScalarField exit_time_field(std::shared_ptr<const DomainIndex> index);

double expected_exit_time(const BallDomain& domain, const LatticePoint& start);

/// CSV rows "x,y,z,value" in lattice units.
void write_field_csv(std::ostream& os, const ScalarField& field);

/// Immutable per-(domain,target) cache so conditioning fields are solved
/// once and shared across trial workers.
class HittingFieldCache {
public:
    std::shared_ptr<const ScalarField> get(const BallDomain& domain,
                                           const LatticePoint& target);

private:
    std::mutex mutex_;
    std::map<std::tuple<double, std::int64_t, std::int64_t, std::int64_t,
                        std::int64_t, std::int64_t, std::int64_t>,
             std::shared_ptr<const ScalarField>>
        cache_;
};

/// Green's-function split of the one-point probability: returns
/// G(0, x) times the Monte Carlo estimate of the non-intersection
/// probability of the loop-erased conditioned walk (x -> 0) with an
/// independent stopped walk from x.  `h` must be hitting_field(domain, 0)
/// and `g` green_function(domain, 0).  The trivial x = center case
/// returns probability one exactly.
Estimate decompose_one_point(const BallDomain& domain, const LatticePoint& x,
                             const ScalarField& h, const ScalarField& g,
                             std::uint64_t trials, std::uint64_t experiment_seed,
                             int workers = 1);

}  // namespace lerw
