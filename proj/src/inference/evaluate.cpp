#include "medvox/evaluate.hpp"

#include "medvox/engine.hpp"
#include "medvox/errors.hpp"

namespace medvox {

std::string_view to_string(Event e) {
    switch (e) {
    case Event::Started: return "STARTED";
    case Event::EpochStarted: return "EPOCH_STARTED";
    case Event::IterationStarted: return "ITERATION_STARTED";
    case Event::IterationCompleted: return "ITERATION_COMPLETED";
    case Event::EpochCompleted: return "EPOCH_COMPLETED";
    case Event::Completed: return "COMPLETED";
    case Event::ExceptionRaised: return "EXCEPTION_RAISED";
    }
    return "?";
}

EvaluationResult evaluate(const Dataset &dataset, const BatchPredictor &predictor, DiceMetric &metric,
                          const SlidingWindowParams &sw, std::uint64_t epoch) {
    EvaluationResult result;
    using E = Engine<DataDict, std::optional<double>>;
    E engine([&](E::State &, const DataDict &item) -> std::optional<double> {
        const auto img = item.find("image");
        const auto lbl = item.find("label");
        if (img == item.end() || lbl == item.end()) throw ConfigError("evaluate needs {image, label} items");
        const MetaVolume pred = sliding_window_infer(img->second, sw, predictor);
        metric.add(pred, lbl->second);
        return dice_metric(pred, lbl->second).mean;
    });
    engine.on(Event::IterationCompleted, [&](E::State &s) { result.per_item.push_back(*s.output); });
    engine.run(
        dataset.size(),
        [&](std::size_t i) {
            Item it = dataset.get(i, epoch);
            if (auto *d = std::get_if<DataDict>(&it)) return std::move(*d);
            throw ConfigError("evaluate needs dictionary items");
        },
        1);
    result.mean_dice = metric.aggregate();
    return result;
}

} // namespace medvox
