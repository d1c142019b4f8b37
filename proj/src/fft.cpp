#include "anls/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

#include "anls/common.hpp"

namespace anls::fft {

namespace {

std::mutex planner_mutex;
std::map<std::pair<int, int>, fftw_plan> plan_cache;

fftw_plan plan_for(int n, int sign) {
  std::lock_guard<std::mutex> lock(planner_mutex);
  auto key = std::make_pair(n, sign);
  auto it = plan_cache.find(key);
  if (it != plan_cache.end()) return it->second;
  // FFTW_UNALIGNED so the plan can execute on any caller buffer.
  std::vector<std::complex<double>> probe(n);
  auto* p = reinterpret_cast<fftw_complex*>(probe.data());
  fftw_plan plan = fftw_plan_dft_1d(n, p, p, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
  plan_cache.emplace(key, plan);
  return plan;
}

}  // namespace

void dft(std::vector<std::complex<double>>& v, int sign) {
  if (v.empty()) throw ParameterError("fft: empty input");
  fftw_plan plan = plan_for(static_cast<int>(v.size()), sign);
  auto* p = reinterpret_cast<fftw_complex*>(v.data());
  fftw_execute_dft(plan, p, p);
}

}  // namespace anls::fft
