#pragma once

#include <coroutine>
#include <exception>
#include <utility>

#include "scoop/value.hpp"

namespace scoop {

/// Lazily started coroutine producing a Value. Routine bodies are Tasks so
/// that a body can suspend while its processor waits for a separate query
/// result. Awaiting a Task runs it with symmetric transfer back to the
/// awaiting coroutine on completion; a top-level Task (no continuation)
/// returns control to whoever resumed it.
class Task {
 public:
  struct promise_type {
    Value value;
    std::exception_ptr error;
    std::coroutine_handle<> continuation;

    Task get_return_object() {
      return Task{std::coroutine_handle<promise_type>::from_promise(*this)};
    }
    std::suspend_always initial_suspend() noexcept { return {}; }

    struct FinalAwaiter {
      bool await_ready() noexcept { return false; }
      std::coroutine_handle<> await_suspend(std::coroutine_handle<promise_type> h) noexcept {
        if (auto next = h.promise().continuation) return next;
        return std::noop_coroutine();
      }
      void await_resume() noexcept {}
    };
    FinalAwaiter final_suspend() noexcept { return {}; }

    void return_value(Value v) { value = std::move(v); }
    void unhandled_exception() { error = std::current_exception(); }
  };

  using Handle = std::coroutine_handle<promise_type>;

  Task() = default;
  explicit Task(Handle h) : handle_(h) {}
  Task(Task&& other) noexcept : handle_(std::exchange(other.handle_, {})) {}
  Task& operator=(Task&& other) noexcept {
    if (this != &other) {
      reset();
      handle_ = std::exchange(other.handle_, {});
    }
    return *this;
  }
  Task(const Task&) = delete;
  Task& operator=(const Task&) = delete;
  ~Task() { reset(); }

  [[nodiscard]] bool valid() const { return static_cast<bool>(handle_); }
  [[nodiscard]] bool done() const { return handle_ && handle_.done(); }
  [[nodiscard]] Handle handle() const { return handle_; }

  /// Result of a finished task; rethrows the body's exception.
  Value result() {
    if (handle_.promise().error) std::rethrow_exception(handle_.promise().error);
    return std::move(handle_.promise().value);
  }

  [[nodiscard]] std::exception_ptr error() const { return handle_.promise().error; }

  struct Awaiter {
    Handle handle;
    bool await_ready() const noexcept { return false; }
    std::coroutine_handle<> await_suspend(std::coroutine_handle<> awaiting) noexcept {
      handle.promise().continuation = awaiting;
      return handle;
    }
    Value await_resume() {
      if (handle.promise().error) std::rethrow_exception(handle.promise().error);
      return std::move(handle.promise().value);
    }
  };

  // Only valid on rvalues so the awaited task outlives its frame.
  Awaiter operator co_await() && { return Awaiter{handle_}; }

 private:
  void reset() {
    if (handle_) handle_.destroy();
    handle_ = {};
  }

  Handle handle_;
};

}  // namespace scoop
