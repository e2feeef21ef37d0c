#include "fedjam/pipeline/metrics.hpp"

#include "fedjam/error.hpp"

#include <string>

namespace fedjam::pipeline {

Confusion confusion(std::span<const double> probs, std::span<const double> labels, double threshold)
{
    if (probs.size() != labels.size())
        throw ShapeError("confusion: probs and labels differ in length");
    Confusion c;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const bool predicted = probs[i] >= threshold;
        const bool actual = labels[i] >= 0.5;
        if (predicted && actual)
            ++c.tp;
        else if (predicted)
            ++c.fp;
        else if (actual)
            ++c.fn;
        else
            ++c.tn;
    }
    return c;
}

EvalReport report_from_counts(const Confusion& c, double threshold)
{
    EvalReport r;
    r.counts = c;
    r.threshold = threshold;
    const auto tp = static_cast<double>(c.tp);
    if (c.tp + c.fp > 0)
        r.precision = tp / static_cast<double>(c.tp + c.fp);
    else
        r.precision_undefined = true;
    if (c.tp + c.fn > 0)
        r.recall = tp / static_cast<double>(c.tp + c.fn);
    else
        r.recall_undefined = true;
    if (r.precision + r.recall > 0.0)
        r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
    else
        r.f1_undefined = true;
    if (c.total() > 0)
        r.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
    return r;
}

EvalReport evaluate(const nn::ModelState& classifier, std::span<const fl::ClientData> clients, double threshold)
{
    if (clients.empty())
        throw DomainError("evaluate: no clients");
    Confusion pooled;
    for (const fl::ClientData& c : clients) {
        if (c.test_x.rows == 0)
            throw DomainError("evaluate: client " + std::to_string(c.client_id) + " has an empty test split");
        const nn::Matrix probs = nn::infer(classifier, c.test_x);
        if (probs.cols != 1)
            throw ShapeError("evaluate: classifier must produce one probability per row");
        const Confusion part = confusion(probs.data, c.test_y, threshold);
        pooled.tp += part.tp;
        pooled.fp += part.fp;
        pooled.fn += part.fn;
        pooled.tn += part.tn;
    }
    return report_from_counts(pooled, threshold);
}

} // namespace fedjam::pipeline
