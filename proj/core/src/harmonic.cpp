#include "lerw/harmonic.hpp"

#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "lerw/engine.hpp"
#include "lerw/loop_erasure.hpp"
#include "lerw/walk.hpp"

namespace lerw {

DomainIndex::DomainIndex(const BallDomain& domain) : domain_(domain) {
    const std::int64_t c = domain.max_offset();
    low_ = -c;
    dim_ = 2 * c + 1;
    cell_to_site_.assign(static_cast<std::size_t>(dim_ * dim_ * dim_), -1);

    for (std::int64_t dx = -c; dx <= c; ++dx)
        for (std::int64_t dy = -c; dy <= c; ++dy)
            for (std::int64_t dz = -c; dz <= c; ++dz) {
                LatticePoint p = domain.center + LatticePoint{dx, dy, dz};
                if (!domain.contains(p)) continue;
                std::size_t cell = static_cast<std::size_t>(
                    ((dx - low_) * dim_ + (dy - low_)) * dim_ + (dz - low_));
                cell_to_site_[cell] = static_cast<std::int32_t>(sites_.size());
                sites_.push_back(p);
            }

    neighbors_.resize(sites_.size());
    for (std::size_t i = 0; i < sites_.size(); ++i)
        for (std::size_t d = 0; d < 6; ++d)
            neighbors_[i][d] = index_of(sites_[i] + kNeighborSteps[d]);
}

std::int32_t DomainIndex::index_of(const LatticePoint& p) const {
    LatticePoint q = p - domain_.center;
    if (q.x < low_ || q.y < low_ || q.z < low_ || q.x >= low_ + dim_ ||
        q.y >= low_ + dim_ || q.z >= low_ + dim_)
        return -1;
    std::size_t cell = static_cast<std::size_t>(
        ((q.x - low_) * dim_ + (q.y - low_)) * dim_ + (q.z - low_));
    return cell_to_site_[cell];
}

ScalarField::ScalarField(std::shared_ptr<const DomainIndex> index,
                         std::vector<double> values)
    : index_(std::move(index)), values_(std::move(values)) {
    if (values_.size() != index_->size())
        throw std::invalid_argument("ScalarField: value count != site count");
}

namespace {

/// Conjugate gradients on the symmetric positive definite stencil system
///   u_i - (1/6) sum_{j ~ i, j free} u_j = rhs_i        (i free)
/// where `fixed` entries are Dirichlet sites whose known values have been
/// folded into rhs by the caller.  Solves to kSolverTolerance in max norm.
std::vector<double> solve_stencil(const DomainIndex& index,
                                  const std::vector<char>& fixed,
                                  const std::vector<double>& rhs,
                                  const char* what) {
    const std::size_t n = index.size();
    std::vector<double> x(n, 0.0), r(rhs), p(rhs), ap(n, 0.0);

    auto apply = [&](const std::vector<double>& v, std::vector<double>& out) {
        for (std::size_t i = 0; i < n; ++i) {
            if (fixed[i]) {
                out[i] = v[i];
                continue;
            }
            double acc = 0.0;
            const auto& nb = index.neighbors(i);
            for (int d = 0; d < 6; ++d) {
                std::int32_t j = nb[static_cast<std::size_t>(d)];
                if (j >= 0 && !fixed[static_cast<std::size_t>(j)])
                    acc += v[static_cast<std::size_t>(j)];
            }
            out[i] = v[i] - acc / 6.0;
        }
    };

    auto dot = [n](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
        return s;
    };
    auto max_abs = [n](const std::vector<double>& v) {
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(v[i]));
        return m;
    };

    for (std::size_t i = 0; i < n; ++i)
        if (fixed[i]) r[i] = p[i] = 0.0;

    double rr = dot(r, r);
    double residual = max_abs(r);
    std::int64_t it = 0;
    while (residual > kSolverTolerance) {
        if (++it > kSolverIterationCap) {
            std::ostringstream msg;
            msg << what << ": no convergence after " << kSolverIterationCap
                << " iterations, max residual " << residual;
            throw std::runtime_error(msg.str());
        }
        apply(p, ap);
        double pap = dot(p, ap);
        if (pap <= 0.0) break;  // numerically converged
        double alpha = rr / pap;
        for (std::size_t i = 0; i < n; ++i) x[i] += alpha * p[i];
        if (it % 64 == 0) {
            // refresh the residual from scratch to avoid recurrence drift
            apply(x, ap);
            for (std::size_t i = 0; i < n; ++i) r[i] = fixed[i] ? 0.0 : rhs[i] - ap[i];
        } else {
            for (std::size_t i = 0; i < n; ++i) r[i] -= alpha * ap[i];
        }
        double rr_next = dot(r, r);
        double beta = rr_next / rr;
        rr = rr_next;
        for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
        residual = max_abs(r);
    }
    return x;
}

}  // namespace

ScalarField hitting_field(const BallDomain& domain, const LatticePoint& target) {
    return hitting_field(std::make_shared<DomainIndex>(domain), target);
}

ScalarField hitting_field(std::shared_ptr<const DomainIndex> index,
                          const LatticePoint& target) {
    std::int32_t t = index->index_of(target);
    if (t < 0) throw std::invalid_argument("hitting_field: target outside domain");
    const std::size_t n = index->size();
    std::vector<char> fixed(n, 0);
    fixed[static_cast<std::size_t>(t)] = 1;
    std::vector<double> rhs(n, 0.0);
    // known unit value at the target feeds its free neighbors
    const auto& nb = index->neighbors(static_cast<std::size_t>(t));
    for (int d = 0; d < 6; ++d) {
        std::int32_t j = nb[static_cast<std::size_t>(d)];
        if (j >= 0) rhs[static_cast<std::size_t>(j)] += 1.0 / 6.0;
    }
    std::vector<double> u = solve_stencil(*index, fixed, rhs, "hitting_field");
    u[static_cast<std::size_t>(t)] = 1.0;
    return ScalarField(std::move(index), std::move(u));
}

ScalarField green_function(const BallDomain& domain, const LatticePoint& source) {
    return green_function(std::make_shared<DomainIndex>(domain), source);
}

ScalarField green_function(std::shared_ptr<const DomainIndex> index,
                           const LatticePoint& source) {
    std::int32_t s = index->index_of(source);
    if (s < 0) throw std::invalid_argument("green_function: source outside domain");
    const std::size_t n = index->size();
    std::vector<char> fixed(n, 0);
    std::vector<double> rhs(n, 0.0);
    rhs[static_cast<std::size_t>(s)] = 1.0;
    std::vector<double> u = solve_stencil(*index, fixed, rhs, "green_function");
    return ScalarField(std::move(index), std::move(u));
}

ScalarField exit_time_field(const BallDomain& domain) {
    return exit_time_field(std::make_shared<DomainIndex>(domain));
}

ScalarField exit_time_field(std::shared_ptr<const DomainIndex> index) {
    const std::size_t n = index->size();
    std::vector<char> fixed(n, 0);
    std::vector<double> rhs(n, 1.0);
    std::vector<double> u = solve_stencil(*index, fixed, rhs, "exit_time_field");
    return ScalarField(std::move(index), std::move(u));
}

double expected_exit_time(const BallDomain& domain, const LatticePoint& start) {
    if (!domain.contains(start))
        throw std::invalid_argument("expected_exit_time: start outside domain");
    return exit_time_field(domain).at(start);
}

void write_field_csv(std::ostream& os, const ScalarField& field) {
    os << "x,y,z,value\n";
    const DomainIndex& index = field.index();
    for (std::size_t i = 0; i < index.size(); ++i) {
        const LatticePoint& p = index.site(i);
        os << p.x << ',' << p.y << ',' << p.z << ',' << field.at_index(i) << '\n';
    }
}

std::shared_ptr<const ScalarField> HittingFieldCache::get(const BallDomain& domain,
                                                          const LatticePoint& target) {
    auto key = std::make_tuple(domain.radius, domain.center.x, domain.center.y,
                               domain.center.z, target.x, target.y, target.z);
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    auto field = std::make_shared<const ScalarField>(hitting_field(domain, target));
    cache_.emplace(key, field);
    return field;
}

Estimate decompose_one_point(const BallDomain& domain, const LatticePoint& x,
                             const ScalarField& h, const ScalarField& g,
                             std::uint64_t trials, std::uint64_t experiment_seed,
                             int workers) {
    if (!domain.contains(x))
        throw std::invalid_argument("decompose_one_point: x outside domain");
    if (x == domain.center)
        return Estimate{1.0, 0.0, trials, experiment_seed, "decompose_one_point"};

    const double green_factor = g.at(x);
    TrialKernel kernel = [&domain, &h, &x](TrialRng& rng, std::span<double> out) {
        LatticePath conditioned = conditioned_walk(domain, x, domain.center, h, rng);
        SelfAvoidingPath erased = loop_erase(conditioned);
        LatticePath independent = srw_until_exit(domain, x, rng);
        out[0] = paths_disjoint_after_first(erased, independent) ? 1.0 : 0.0;
    };
    MomentSummary summary =
        run_trials(kernel, 1, experiment_seed, 0, trials, workers);
    Estimate est = summary.estimate(0, "decompose_one_point");
    est.mean *= green_factor;
    est.stderr_of_mean *= green_factor;
    return est;
}

}  // namespace lerw
