#pragma once

#include <memory>
#include <utility>

namespace msadl {

/// Immutable, shareable holder for recursive value types. Copies share the
/// pointee; equality is deep.
template <class T>
class Box {
public:
    Box() : ptr_(std::make_shared<const T>()) {}
    Box(T value) : ptr_(std::make_shared<const T>(std::move(value))) {}  // NOLINT(implicit)

    const T& operator*() const noexcept { return *ptr_; }
    const T* operator->() const noexcept { return ptr_.get(); }
    const T& get() const noexcept { return *ptr_; }

    friend bool operator==(const Box& a, const Box& b) {
        return a.ptr_ == b.ptr_ || *a.ptr_ == *b.ptr_;
    }

private:
    std::shared_ptr<const T> ptr_;
};

}  // namespace msadl
