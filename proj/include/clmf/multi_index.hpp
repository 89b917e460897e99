#ifndef CLMF_MULTI_INDEX_HPP
#define CLMF_MULTI_INDEX_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace clmf {

// Frequency vector (n_1,...,n_k) in Z^k.
using MultiIndex = std::vector<int>;

struct MultiIndexHash {
    std::size_t operator()(const MultiIndex& n) const noexcept;
};

long index_sum(const MultiIndex& n);
long index_sum_squares(const MultiIndex& n);
bool is_zero(const MultiIndex& n);
MultiIndex negate(const MultiIndex& n);

// Removes n_i and n_j (i < j, 0-based) and inserts n_i + n_j at position i.
MultiIndex fold(const MultiIndex& n, int i, int j);

// Drops entry l.
MultiIndex drop(const MultiIndex& n, int l);

// All vectors of [-R, R]^k in lexicographic order.
std::vector<MultiIndex> cube(int k, int R);

std::string to_string(const MultiIndex& n);

}  // namespace clmf

#endif
