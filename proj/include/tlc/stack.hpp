#pragma once

#include <cstddef>
#include <functional>

namespace tlc {

/// Default stack for deep evaluation: 1 GiB of reserved address space.
inline constexpr std::size_t kDeepStack = std::size_t{1} << 30;

/// Run `fn` to completion on a fresh thread with the given stack size.
/// Exceptions thrown by `fn` are rethrown in the caller.
void run_with_stack(const std::function<void()>& fn, std::size_t stack_bytes = kDeepStack);

}  // namespace tlc
