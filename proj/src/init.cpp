#include "stegodna/init.hpp"

#include <cmath>
#include <stdexcept>

#include "stegodna/rng.hpp"

namespace stegodna {

double glorot_bound(std::size_t fan_in, std::size_t fan_out) {
  if (fan_in == 0 || fan_out == 0) throw std::invalid_argument("fans must be positive");
  return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

Tensor glorot_tensor(std::vector<std::size_t> shape, std::size_t fan_in,
                     std::size_t fan_out, std::mt19937_64& rng) {
  const double bound = glorot_bound(fan_in, fan_out);
  Tensor t = Tensor::zeros(std::move(shape));
  for (double& v : t.values) v = uniform_real(rng, -bound, bound);
  return t;
}

Tensor glorot_init(std::size_t fan_in, std::size_t fan_out, std::mt19937_64& rng) {
  return glorot_tensor({fan_out, fan_in}, fan_in, fan_out, rng);
}

Tensor glorot_init(std::size_t fan_in, std::size_t fan_out, std::uint64_t seed) {
  auto rng = substream(seed, "glorot");
  return glorot_init(fan_in, fan_out, rng);
}

}  // namespace stegodna
