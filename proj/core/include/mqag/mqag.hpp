// Copyright 2026 The MQAG Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "mqag/backend.hpp"
#include "mqag/correlation.hpp"
#include "mqag/dataset.hpp"
#include "mqag/distributions.hpp"
#include "mqag/error.hpp"
#include "mqag/harness.hpp"
#include "mqag/remote_backend.hpp"
#include "mqag/scoring.hpp"
#include "mqag/textmetrics.hpp"
#include "mqag/wire.hpp"
