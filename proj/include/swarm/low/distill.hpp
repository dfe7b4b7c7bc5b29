#pragma once

#include <memory>

#include "swarm/low/envs.hpp"

namespace swarm::low {

// Capacity-bounded store of <input, action> pairs in the student's (padded)
// input layout; `pattern` tags which teacher produced each tuple.
struct DistillTuple {
    nn::VectorXd input;
    nn::VectorXd action;
    int pattern = 0;
};

class DistillBuffer {
 public:
    explicit DistillBuffer(size_t capacity) : capacity_(capacity) {}

    void add(DistillTuple t);
    size_t size() const { return tuples_.size(); }
    const DistillTuple& at(size_t i) const { return tuples_[i]; }

    void save(const std::string& path) const;
    static DistillBuffer load(const std::string& path);

 private:
    size_t capacity_;
    size_t next_ = 0;  // FIFO slot once full
    std::vector<DistillTuple> tuples_;
};

// Pads a teacher-layout input (pattern c) into the student layout: the
// neighbor block keeps its first 4*(c-1) entries, the rest stay zero.
nn::VectorXd pad_to_student(const nn::VectorXd& teacher_input, int pattern, int student_slots,
                            int lidar_rays);

// Runs the teacher (deterministic means) in its own environment and stores
// padded tuples.
void collect_teacher_tuples(LowPolicy& teacher, int pattern, const LowEnvOptions& env_opt,
                            int steps, int student_slots, uint64_t seed, DistillBuffer& buffer);

struct DistillReport {
    std::vector<double> loss_curve;  // per epoch, mean squared error
};

// Adam regression of the student onto buffered actions.
DistillReport distill(LowPolicy& student, const DistillBuffer& buffer, int epochs, int batch_size,
                      double lr, uint64_t seed);

// Mean squared action error of the student over buffer indices [begin, end).
double distill_mse(LowPolicy& student, const DistillBuffer& buffer, size_t begin, size_t end);

}  // namespace swarm::low
