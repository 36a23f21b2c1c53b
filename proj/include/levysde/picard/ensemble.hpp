#pragma once

#include "levysde/core/error.hpp"
#include "levysde/core/types.hpp"
#include "levysde/model/coefficients.hpp"
#include "levysde/noise/noise_bundle.hpp"

#include <algorithm>
#include <cstddef>
#include <memory>
#include <vector>

namespace levysde {

/// How jump terms pick the state they act on.
enum class LeftLimit {
    /// F is evaluated at the last grid node strictly before the jump time.
    LastNodeBefore,
};

/// One Picard iterate X_k on every path of a noise bundle: states at all grid
/// nodes, stored path-major as paths x nodes x d.
class IterateEnsemble {
public:
    IterateEnsemble(std::shared_ptr<const NoiseBundle> bundle, std::size_t d, std::size_t iterate)
        : bundle_(std::move(bundle)), d_(d), iterate_(iterate) {
        if (!bundle_) throw ContractError("iterate ensemble needs a noise bundle");
        data_.assign(bundle_->path_count() * bundle_->grid().nodes() * d_, 0.0);
        initial_.assign(bundle_->path_count() * d_, 0.0);
    }

    /// X_0 = xi on every node, xi drawn per path from the (seed, Initial, id) substream.
    static IterateEnsemble initial(const CoefficientSet& c, std::shared_ptr<const NoiseBundle> bundle) {
        IterateEnsemble e(std::move(bundle), c.d, 0);
        for (std::size_t p = 0; p < e.path_count(); ++p) {
            auto s = CounterStream::derive(e.bundle_->seed(), StreamPurpose::Initial, {e.bundle_->path(p).id});
            const Vector xi = c.xi.sample(s);
            e.set_initial(p, xi);
            for (std::size_t i = 0; i < e.nodes(); ++i) e.set(p, i, xi);
        }
        return e;
    }

    std::size_t iterate() const noexcept { return iterate_; }
    std::size_t dim() const noexcept { return d_; }
    std::size_t path_count() const noexcept { return bundle_->path_count(); }
    std::size_t nodes() const noexcept { return bundle_->grid().nodes(); }
    const TimeGrid& grid() const noexcept { return bundle_->grid(); }
    const NoiseBundle& bundle() const noexcept { return *bundle_; }
    const std::shared_ptr<const NoiseBundle>& bundle_ptr() const noexcept { return bundle_; }
    LeftLimit left_limit() const noexcept { return LeftLimit::LastNodeBefore; }

    Eigen::Map<const Vector> state(std::size_t path, std::size_t node) const {
        return {data_.data() + offset(path, node), static_cast<Eigen::Index>(d_)};
    }

    Eigen::Map<const Vector> initial_value(std::size_t path) const {
        return {initial_.data() + path * d_, static_cast<Eigen::Index>(d_)};
    }

    void set(std::size_t path, std::size_t node, const Vector& v) {
        std::copy(v.data(), v.data() + d_, data_.begin() + static_cast<std::ptrdiff_t>(offset(path, node)));
    }

    void set_initial(std::size_t path, const Vector& v) {
        std::copy(v.data(), v.data() + d_, initial_.begin() + static_cast<std::ptrdiff_t>(path * d_));
    }

    /// Both ensembles are defined on the same noise realization and grid.
    bool shares_noise_with(const IterateEnsemble& o) const noexcept {
        return d_ == o.d_ && (bundle_ == o.bundle_ || bundle_->same_source(*o.bundle_));
    }

    const std::vector<double>& raw() const noexcept { return data_; }

private:
    std::size_t offset(std::size_t path, std::size_t node) const noexcept { return (path * nodes() + node) * d_; }

    std::shared_ptr<const NoiseBundle> bundle_;
    std::size_t d_;
    std::size_t iterate_;
    std::vector<double> data_;
    std::vector<double> initial_;
};

}  // namespace levysde
