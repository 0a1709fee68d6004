#include <gtest/gtest.h>

#include "oracles.hpp"

TEST(StoreProperties, RisingEdgesAndVersionsMatchReferenceModel)
{
    std::mt19937_64 rng(20240601);
    for (int trial = 0; trial < 1000; ++trial)
        ASSERT_EQ(oracle::store_trial(rng), "") << "trial " << trial;
}

TEST(StoreProperties, ReferenceEvaluatorAgreesWithConditions)
{
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 2000; ++trial) {
        const camcp::Condition c = oracle::random_condition(rng, 4);
        oracle::Model m;
        camcp::EntryMap entries;
        for (const auto& k : oracle::keys())
            if (rng() % 2) {
                const camcp::Value v = oracle::values()[rng() % oracle::values().size()];
                m[k] = v;
                entries.emplace(k, camcp::ContextEntry{k, v, 1, "w", 1});
            }
        ASSERT_EQ(c.evaluate(entries), oracle::eval(c.to_value(), m)) << c.to_value().dump();
    }
}
