#ifndef HOLONOMY_TENSOR_HPP
#define HOLONOMY_TENSOR_HPP

#include <cassert>
#include <cstddef>
#include <vector>

#include "holonomy/expr.hpp"
#include "holonomy/linalg.hpp"

namespace holonomy {

/// Dense rank-general array; ranks stay small (<= 4 + derivative order).
template <class T>
class NDArray {
 public:
  NDArray() = default;
  explicit NDArray(std::vector<std::size_t> dims, T fill = T())
      : dims_(std::move(dims)) {
    std::size_t total = 1;
    strides_.assign(dims_.size(), 1);
    for (std::size_t i = dims_.size(); i-- > 0;) {
      strides_[i] = total;
      total *= dims_[i];
    }
    data_.assign(total, fill);
  }

  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t rank() const { return dims_.size(); }
  std::size_t size() const { return data_.size(); }

  std::size_t offset(const std::vector<std::size_t>& idx) const {
    assert(idx.size() == dims_.size());
    std::size_t o = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) o += idx[i] * strides_[i];
    return o;
  }

  template <class... I>
  T& operator()(I... i) {
    return data_[flat_of(i...)];
  }
  template <class... I>
  const T& operator()(I... i) const {
    return data_[flat_of(i...)];
  }

  T& at(const std::vector<std::size_t>& idx) { return data_[offset(idx)]; }
  const T& at(const std::vector<std::size_t>& idx) const {
    return data_[offset(idx)];
  }

  T& flat(std::size_t i) { return data_[i]; }
  const T& flat(std::size_t i) const { return data_[i]; }

  std::vector<std::size_t> unflatten(std::size_t o) const {
    std::vector<std::size_t> idx(dims_.size());
    for (std::size_t i = 0; i < dims_.size(); ++i) {
      idx[i] = o / strides_[i];
      o %= strides_[i];
    }
    return idx;
  }

 private:
  template <class... I>
  std::size_t flat_of(I... i) const {
    assert(sizeof...(I) == dims_.size());
    std::size_t idx[] = {static_cast<std::size_t>(i)...};
    std::size_t o = 0;
    for (std::size_t k = 0; k < sizeof...(I); ++k) o += idx[k] * strides_[k];
    return o;
  }

  std::vector<std::size_t> dims_, strides_;
  std::vector<T> data_;
};

template <class S>
NDArray<S> eval_tensor(const NDArray<Expr>& t, const PointValues<S>& at) {
  NDArray<S> out(t.dims(), S(0));
  for (std::size_t i = 0; i < t.size(); ++i)
    if (!t.flat(i).is_zero()) out.flat(i) = eval<S>(t.flat(i), at);
  return out;
}

}  // namespace holonomy

#endif
