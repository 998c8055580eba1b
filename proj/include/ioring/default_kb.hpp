#pragma once

#include <string_view>

namespace ioring {

/// Shipped knowledge base: naming patterns, mock cell library, rules and
/// power domains. Identical to data/default_kb.json.
inline constexpr std::string_view kDefaultKnowledgeBase = R"KB({
  "patterns": [
    {
      "pattern": "DCLK\\w*",
      "signal_class": "digital_clock",
      "device_type": "PDIO_D",
      "direction": "input",
      "domain": "DVDD",
      "connections": {
        "PAD": "{name}",
        "C": "{name}_C"
      }
    },
    {
      "pattern": "VCM\\w*",
      "signal_class": "common_mode",
      "device_type": "APIO",
      "direction": "passive",
      "domain": "AVDD",
      "connections": {
        "PAD": "{name}",
        "C": "{name}_C"
      }
    },
    {
      "pattern": "VREF[NP]?\\w*",
      "signal_class": "reference_voltage",
      "device_type": "APIO",
      "direction": "passive",
      "domain": "AVDD",
      "connections": {
        "PAD": "{name}",
        "C": "{name}_C"
      }
    },
    {
      "pattern": "AVDD_SAR\\w*",
      "signal_class": "supply",
      "device_type": "PVDD_A",
      "direction": "power",
      "domain": "AVDD_SAR",
      "connections": {}
    },
    {
      "pattern": "AVSS_SAR\\w*",
      "signal_class": "ground",
      "device_type": "PVSS_A",
      "direction": "power",
      "domain": "AVDD_SAR",
      "connections": {}
    },
    {
      "pattern": "AVDD\\w*",
      "signal_class": "supply",
      "device_type": "PVDD_A",
      "direction": "power",
      "domain": "AVDD",
      "connections": {}
    },
    {
      "pattern": "AVSS\\w*",
      "signal_class": "ground",
      "device_type": "PVSS_A",
      "direction": "power",
      "domain": "AVDD",
      "connections": {}
    },
    {
      "pattern": "DVDD\\w*",
      "signal_class": "supply",
      "device_type": "PVDD_D",
      "direction": "power",
      "domain": "DVDD",
      "connections": {}
    },
    {
      "pattern": "DVSS\\w*",
      "signal_class": "ground",
      "device_type": "PVSS_D",
      "direction": "power",
      "domain": "DVDD",
      "connections": {}
    },
    {
      "pattern": "VDD\\w*",
      "signal_class": "supply",
      "device_type": "PVDD_D",
      "direction": "power",
      "domain": "DVDD",
      "connections": {}
    },
    {
      "pattern": "VSS\\w*",
      "signal_class": "ground",
      "device_type": "PVSS_D",
      "direction": "power",
      "domain": "DVDD",
      "connections": {}
    },
    {
      "pattern": "VIN[NP]?\\w*",
      "signal_class": "analog_signal",
      "device_type": "APIO",
      "direction": "input",
      "domain": "AVDD",
      "connections": {
        "PAD": "{name}",
        "C": "{name}_C"
      }
    },
    {
      "pattern": "D\\w*",
      "signal_class": "digital_io",
      "device_type": "PDIO_D",
      "direction": "bidir",
      "domain": "DVDD",
      "connections": {
        "PAD": "{name}",
        "C": "{name}_C"
      }
    },
    {
      "pattern": "A\\w*",
      "signal_class": "analog_signal",
      "device_type": "APIO",
      "direction": "bidir",
      "domain": "AVDD",
      "connections": {
        "PAD": "{name}",
        "C": "{name}_C"
      }
    }
  ],
  "cells": {
    "PCORNER": {
      "kind": "corner",
      "width_nm": 120000,
      "height_nm": 120000,
      "pins": [],
      "rail_continuity": {
        "vdd": true,
        "vss": true
      },
      "domain_tag": "any"
    },
    "PDIO_D": {
      "kind": "pad",
      "width_nm": 60000,
      "height_nm": 120000,
      "pins": [
        {
          "name": "PAD",
          "role": "signal",
          "rect": [
            10000,
            5000,
            50000,
            45000
          ]
        },
        {
          "name": "C",
          "role": "core_side",
          "rect": [
            25000,
            110000,
            35000,
            120000
          ]
        },
        {
          "name": "VDD",
          "role": "rail_vdd",
          "rect": [
            0,
            80000,
            60000,
            90000
          ]
        },
        {
          "name": "VSS",
          "role": "rail_vss",
          "rect": [
            0,
            95000,
            60000,
            105000
          ]
        }
      ],
      "rail_continuity": {
        "vdd": true,
        "vss": true
      },
      "domain_tag": "DVDD"
    },
    "APIO": {
      "kind": "pad",
      "width_nm": 60000,
      "height_nm": 120000,
      "pins": [
        {
          "name": "PAD",
          "role": "signal",
          "rect": [
            10000,
            5000,
            50000,
            45000
          ]
        },
        {
          "name": "C",
          "role": "core_side",
          "rect": [
            25000,
            110000,
            35000,
            120000
          ]
        },
        {
          "name": "VDD",
          "role": "rail_vdd",
          "rect": [
            0,
            80000,
            60000,
            90000
          ]
        },
        {
          "name": "VSS",
          "role": "rail_vss",
          "rect": [
            0,
            95000,
            60000,
            105000
          ]
        }
      ],
      "rail_continuity": {
        "vdd": true,
        "vss": true
      },
      "domain_tag": "AVDD"
    },
    "APAD_LOWCAP": {
      "kind": "custom_pad",
      "width_nm": 50000,
      "height_nm": 120000,
      "pins": [
        {
          "name": "PAD",
          "role": "signal",
          "rect": [
            10000,
            5000,
            40000,
            45000
          ]
        },
        {
          "name": "C",
          "role": "core_side",
          "rect": [
            20000,
            110000,
            30000,
            120000
          ]
        },
        {
          "name": "VDD",
          "role": "rail_vdd",
          "rect": [
            0,
            80000,
            50000,
            90000
          ]
        },
        {
          "name": "VSS",
          "role": "rail_vss",
          "rect": [
            0,
            95000,
            50000,
            105000
          ]
        }
      ],
      "rail_continuity": {
        "vdd": true,
        "vss": true
      },
      "domain_tag": "AVDD"
    },
    "PVDD_D": {
      "kind": "pad",
      "width_nm": 60000,
      "height_nm": 120000,
      "pins": [
        {
          "name": "PAD",
          "role": "rail_vdd",
          "rect": [
            10000,
            5000,
            50000,
            45000
          ]
        },
        {
          "name": "VDD",
          "role": "rail_vdd",
          "rect": [
            0,
            80000,
            60000,
            90000
          ]
        },
        {
          "name": "VSS",
          "role": "rail_vss",
          "rect": [
            0,
            95000,
            60000,
            105000
          ]
        }
      ],
      "rail_continuity": {
        "vdd": true,
        "vss": true
      },
      "domain_tag": "DVDD",
      "supply": "vdd"
    },
    "PVSS_D": {
      "kind": "pad",
      "width_nm": 60000,
      "height_nm": 120000,
      "pins": [
        {
          "name": "PAD",
          "role": "rail_vss",
          "rect": [
            10000,
            5000,
            50000,
            45000
          ]
        },
        {
          "name": "VDD",
          "role": "rail_vdd",
          "rect": [
            0,
            80000,
            60000,
            90000
          ]
        },
        {
          "name": "VSS",
          "role": "rail_vss",
          "rect": [
            0,
            95000,
            60000,
            105000
          ]
        }
      ],
      "rail_continuity": {
        "vdd": true,
        "vss": true
      },
      "domain_tag": "DVDD",
      "supply": "vss"
    },
    "PVDD_A": {
      "kind": "pad",
      "width_nm": 60000,
      "height_nm": 120000,
      "pins": [
        {
          "name": "PAD",
          "role": "rail_vdd",
          "rect": [
            10000,
            5000,
            50000,
            45000
          ]
        },
        {
          "name": "VDD",
          "role": "rail_vdd",
          "rect": [
            0,
            80000,
            60000,
            90000
          ]
        },
        {
          "name": "VSS",
          "role": "rail_vss",
          "rect": [
            0,
            95000,
            60000,
            105000
          ]
        }
      ],
      "rail_continuity": {
        "vdd": true,
        "vss": true
      },
      "domain_tag": "AVDD",
      "supply": "vdd"
    },
    "PVSS_A": {
      "kind": "pad",
      "width_nm": 60000,
      "height_nm": 120000,
      "pins": [
        {
          "name": "PAD",
          "role": "rail_vss",
          "rect": [
            10000,
            5000,
            50000,
            45000
          ]
        },
        {
          "name": "VDD",
          "role": "rail_vdd",
          "rect": [
            0,
            80000,
            60000,
            90000
          ]
        },
        {
          "name": "VSS",
          "role": "rail_vss",
          "rect": [
            0,
            95000,
            60000,
            105000
          ]
        }
      ],
      "rail_continuity": {
        "vdd": true,
        "vss": true
      },
      "domain_tag": "AVDD",
      "supply": "vss"
    },
    "PBRK": {
      "kind": "breaker",
      "width_nm": 10000,
      "height_nm": 120000,
      "pins": [],
      "rail_continuity": {
        "vdd": false,
        "vss": false
      },
      "domain_tag": "any"
    },
    "FILLER20": {
      "kind": "filler",
      "width_nm": 20000,
      "height_nm": 120000,
      "pins": [],
      "rail_continuity": {
        "vdd": true,
        "vss": true
      },
      "domain_tag": "any"
    },
    "FILLER10": {
      "kind": "filler",
      "width_nm": 10000,
      "height_nm": 120000,
      "pins": [],
      "rail_continuity": {
        "vdd": true,
        "vss": true
      },
      "domain_tag": "any"
    },
    "FILLER5": {
      "kind": "filler",
      "width_nm": 5000,
      "height_nm": 120000,
      "pins": [],
      "rail_continuity": {
        "vdd": true,
        "vss": true
      },
      "domain_tag": "any"
    },
    "FILLER1": {
      "kind": "filler",
      "width_nm": 1000,
      "height_nm": 120000,
      "pins": [],
      "rail_continuity": {
        "vdd": true,
        "vss": true
      },
      "domain_tag": "any"
    },
    "FILLER05": {
      "kind": "filler",
      "width_nm": 500,
      "height_nm": 120000,
      "pins": [],
      "rail_continuity": {
        "vdd": true,
        "vss": true
      },
      "domain_tag": "any"
    }
  },
  "rules": {
    "grid": 500,
    "abut_tol": 0,
    "corner_required": true,
    "domain_isolation_required": true,
    "esd_supply_per_domain": true,
    "stagger_row_offset": 120000,
    "stagger_min_overlap": 20000
  },
  "domains": [
    {
      "name": "DVDD",
      "vdd_net": "DVDD",
      "vss_net": "DVSS"
    },
    {
      "name": "AVDD",
      "vdd_net": "AVDD",
      "vss_net": "AVSS"
    },
    {
      "name": "AVDD_SAR",
      "vdd_net": "AVDD_SAR",
      "vss_net": "AVSS_SAR"
    }
  ]
}
)KB";

} // namespace ioring
