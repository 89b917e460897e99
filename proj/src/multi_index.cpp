#include "clmf/multi_index.hpp"

#include <sstream>
#include <stdexcept>

namespace clmf {

std::size_t MultiIndexHash::operator()(const MultiIndex& n) const noexcept
{
    std::uint64_t h = 0x9E3779B97F4A7C15ull ^ n.size();
    for (int v : n) {
        std::uint64_t x = static_cast<std::uint64_t>(static_cast<std::int64_t>(v));
        x ^= x >> 33;
        x *= 0xff51afd7ed558ccdull;
        x ^= x >> 33;
        h ^= x + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
}

long index_sum(const MultiIndex& n)
{
    long s = 0;
    for (int v : n) s += v;
    return s;
}

long index_sum_squares(const MultiIndex& n)
{
    long s = 0;
    for (int v : n) s += static_cast<long>(v) * v;
    return s;
}

bool is_zero(const MultiIndex& n)
{
    for (int v : n)
        if (v != 0) return false;
    return true;
}

MultiIndex negate(const MultiIndex& n)
{
    MultiIndex m(n.size());
    for (std::size_t r = 0; r < n.size(); ++r) m[r] = -n[r];
    return m;
}

MultiIndex fold(const MultiIndex& n, int i, int j)
{
    if (i < 0 || j <= i || j >= static_cast<int>(n.size()))
        throw std::invalid_argument("fold: need 0 <= i < j < k");
    MultiIndex m;
    m.reserve(n.size() - 1);
    for (int r = 0; r < static_cast<int>(n.size()); ++r) {
        if (r == i)
            m.push_back(n[i] + n[j]);
        else if (r != j)
            m.push_back(n[r]);
    }
    return m;
}

MultiIndex drop(const MultiIndex& n, int l)
{
    if (l < 0 || l >= static_cast<int>(n.size()))
        throw std::invalid_argument("drop: position out of range");
    MultiIndex m;
    m.reserve(n.size() - 1);
    for (int r = 0; r < static_cast<int>(n.size()); ++r)
        if (r != l) m.push_back(n[r]);
    return m;
}

std::vector<MultiIndex> cube(int k, int R)
{
    if (k < 1 || R < 0) throw std::invalid_argument("cube: need k >= 1 and R >= 0");
    std::vector<MultiIndex> out;
    MultiIndex n(k, -R);
    while (true) {
        out.push_back(n);
        int r = k - 1;
        while (r >= 0 && n[r] == R) {
            n[r] = -R;
            --r;
        }
        if (r < 0) break;
        ++n[r];
    }
    return out;
}

std::string to_string(const MultiIndex& n)
{
    std::ostringstream os;
    os << '(';
    for (std::size_t r = 0; r < n.size(); ++r) {
        if (r) os << ',';
        os << n[r];
    }
    os << ')';
    return os.str();
}

}  // namespace clmf
