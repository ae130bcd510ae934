#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scnp/tensor.hpp"

namespace scnp {

// TNS1 container: 4 ASCII magic bytes "TNS1", uint32 LE rank, rank uint32 LE
// dims, then float32 LE values row-major (width fastest).

void save_tns(const std::string& path, const std::vector<std::uint32_t>& dims,
              const std::vector<real>& data);

struct TnsFile {
    std::vector<std::uint32_t> dims;
    std::vector<real> data; // widened from the stored float32
};

TnsFile load_tns(const std::string& path);

void save_tensor(const std::string& path, const Tensor4& t);
Tensor4 load_tensor4(const std::string& path);

/// Loads a rank-3 (c,h,w) file as a single-batch Tensor4.
Tensor4 load_sample(const std::string& path);

/// Quantizes each value through float32, so a later save/load round-trip is
/// bit-exact against the in-memory tensor.
void quantize_f32(Tensor4& t);

} // namespace scnp
