#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "stegodna/tensor.hpp"

namespace stegodna {

// Uniform on (-b, b) with b = sqrt(6 / (fan_in + fan_out)).
double glorot_bound(std::size_t fan_in, std::size_t fan_out);

Tensor glorot_init(std::size_t fan_in, std::size_t fan_out, std::mt19937_64& rng);
Tensor glorot_init(std::size_t fan_in, std::size_t fan_out, std::uint64_t seed);

// Same distribution, arbitrary shape (fans given explicitly).
Tensor glorot_tensor(std::vector<std::size_t> shape, std::size_t fan_in,
                     std::size_t fan_out, std::mt19937_64& rng);

}  // namespace stegodna
