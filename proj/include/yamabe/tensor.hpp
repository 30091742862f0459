#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace yamabe {

/// Dense tensor of fixed rank over a single index range [0, dim).
template <class S>
class Tensor {
public:
    Tensor() = default;
    Tensor(int rank, int dim) : rank_(rank), dim_(dim) {
        if (rank < 0 || dim < 0) throw std::invalid_argument("Tensor: negative shape");
        std::size_t size = 1;
        for (int r = 0; r < rank; ++r) size *= static_cast<std::size_t>(dim);
        data_.assign(size, S(0));
    }

    int rank() const { return rank_; }
    int dim() const { return dim_; }
    std::size_t size() const { return data_.size(); }
    const std::vector<S>& data() const { return data_; }
    std::vector<S>& data() { return data_; }

    template <class... I>
    S& operator()(I... idx) {
        return data_[offset(idx...)];
    }
    template <class... I>
    const S& operator()(I... idx) const {
        return data_[offset(idx...)];
    }

    /// Multi-index of a flat position (first index slowest).
    std::vector<int> unflatten(std::size_t pos) const {
        std::vector<int> idx(rank_);
        for (int r = rank_ - 1; r >= 0; --r) {
            idx[r] = static_cast<int>(pos % dim_);
            pos /= dim_;
        }
        return idx;
    }

    bool all_zero() const {
        for (const auto& v : data_) {
            if (!(v == S(0))) return false;
        }
        return true;
    }

    template <class T>
    Tensor<T> cast(T (*conv)(const S&)) const {
        Tensor<T> r(rank_, dim_);
        for (std::size_t k = 0; k < data_.size(); ++k) r.data()[k] = conv(data_[k]);
        return r;
    }

    friend bool operator==(const Tensor& a, const Tensor& b) {
        return a.rank_ == b.rank_ && a.dim_ == b.dim_ && a.data_ == b.data_;
    }

private:
    template <class... I>
    std::size_t offset(I... idx) const {
        static_assert(sizeof...(I) > 0);
        if (static_cast<int>(sizeof...(I)) != rank_) throw std::out_of_range("Tensor: wrong index count");
        std::size_t off = 0;
        for (int i : std::array<int, sizeof...(I)>{static_cast<int>(idx)...}) {
            if (i < 0 || i >= dim_) throw std::out_of_range("Tensor: index out of range");
            off = off * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
        }
        return off;
    }

    int rank_ = 0;
    int dim_ = 0;
    std::vector<S> data_{S(0)};
};

}  // namespace yamabe
