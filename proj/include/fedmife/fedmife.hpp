/*
 * Copyright 2026 The FedMife Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FEDMIFE_FEDMIFE_HPP_
#define FEDMIFE_FEDMIFE_HPP_

#include "fedmife/bench.hpp"
#include "fedmife/bigint.hpp"
#include "fedmife/dlog.hpp"
#include "fedmife/dp.hpp"
#include "fedmife/errors.hpp"
#include "fedmife/fixedpoint.hpp"
#include "fedmife/group.hpp"
#include "fedmife/learning.hpp"
#include "fedmife/mife.hpp"
#include "fedmife/network.hpp"
#include "fedmife/protocol.hpp"
#include "fedmife/report.hpp"
#include "fedmife/scenario.hpp"
#include "fedmife/serialize.hpp"
#include "fedmife/tpa.hpp"

#endif  // FEDMIFE_FEDMIFE_HPP_
