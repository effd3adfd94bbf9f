#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

namespace medvox {

enum class Event {
    Started,
    EpochStarted,
    IterationStarted,
    IterationCompleted,
    EpochCompleted,
    Completed,
    ExceptionRaised,
};

std::string_view to_string(Event e);

// Minimal event-driven loop. Handlers run in attachment order. A handler
// that sets `exception_handled` during ExceptionRaised makes the engine skip
// the rest of that iteration and carry on; otherwise the exception propagates.
template <class Input, class Output>
class Engine {
  public:
    struct State {
        std::size_t epoch = 0;     // 1-based once started
        std::size_t iteration = 0; // global, 1-based
        std::size_t epoch_length = 0;
        std::optional<Output> output;
        std::exception_ptr exception;
        bool exception_handled = false;
    };

    using StepFn = std::function<Output(State &, const Input &)>;
    using Handler = std::function<void(Event, State &)>;

    explicit Engine(StepFn step) : step_(std::move(step)) {}

    // Called for every event.
    void attach(Handler h) { handlers_.push_back({std::nullopt, std::move(h)}); }
    // Called only for `e`.
    void on(Event e, std::function<void(State &)> h) {
        handlers_.push_back({e, [h = std::move(h)](Event, State &s) { h(s); }});
    }

    State run(std::size_t n_items, const std::function<Input(std::size_t)> &fetch, std::size_t max_epochs) {
        State s;
        s.epoch_length = n_items;
        guarded(s, [&] { fire(Event::Started, s); });
        for (std::size_t e = 1; e <= max_epochs; ++e) {
            s.epoch = e;
            guarded(s, [&] { fire(Event::EpochStarted, s); });
            for (std::size_t i = 0; i < n_items; ++i) {
                ++s.iteration;
                guarded(s, [&] {
                    fire(Event::IterationStarted, s);
                    s.output = step_(s, fetch(i));
                    fire(Event::IterationCompleted, s);
                });
            }
            guarded(s, [&] { fire(Event::EpochCompleted, s); });
        }
        guarded(s, [&] { fire(Event::Completed, s); });
        return s;
    }

    State run(const std::vector<Input> &data, std::size_t max_epochs) {
        return run(data.size(), [&](std::size_t i) { return data[i]; }, max_epochs);
    }

  private:
    void fire(Event e, State &s) {
        for (auto &[filter, h] : handlers_) {
            if (!filter || *filter == e) h(e, s);
        }
    }

    template <class F>
    void guarded(State &s, F &&body) {
        try {
            body();
        } catch (...) {
            s.exception = std::current_exception();
            s.exception_handled = false;
            fire(Event::ExceptionRaised, s);
            if (!s.exception_handled) std::rethrow_exception(s.exception);
            s.exception = nullptr;
            s.exception_handled = false;
        }
    }

    StepFn step_;
    std::vector<std::pair<std::optional<Event>, Handler>> handlers_;
};

} // namespace medvox
