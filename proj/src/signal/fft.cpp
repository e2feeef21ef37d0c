#include "fedjam/signal/fft.hpp"

#include "fedjam/error.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace fedjam::signal {

namespace {

class PlanCache {
public:
    ~PlanCache()
    {
        for (auto& [key, plan] : plans_)
            fftw_destroy_plan(plan);
    }

    fftw_plan get(int n, FftDirection dir)
    {
        std::lock_guard lock(mutex_);
        auto key = std::make_pair(n, dir);
        if (auto it = plans_.find(key); it != plans_.end())
            return it->second;
        // FFTW planning is not thread-safe; execution with new arrays is.
        std::vector<fftw_complex> scratch(static_cast<std::size_t>(n));
        fftw_plan plan = fftw_plan_dft_1d(n, scratch.data(), scratch.data(),
                                          dir == FftDirection::forward ? FFTW_FORWARD : FFTW_BACKWARD,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (plan == nullptr)
            throw Error("fftw: failed to create plan");
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<int, FftDirection>, fftw_plan> plans_;
};

PlanCache& plan_cache()
{
    static PlanCache cache;
    return cache;
}

} // namespace

void dft_inplace(std::span<cplx> data, FftDirection dir)
{
    if (data.empty())
        return;
    fftw_plan plan = plan_cache().get(static_cast<int>(data.size()), dir);
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, p, p);
}

} // namespace fedjam::signal
