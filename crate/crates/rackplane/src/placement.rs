//! Per-application placement decisions shared by the flow, power and solver
//! layers.

use std::fmt;

use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

/// The outcome for one application: host it on a (cpu, mem, sto) node triple
/// or reject it.
///
/// The derived ordering is the canonical tie-break order: triples compare
/// lexicographically by (cpu, mem, sto) node ids and `Rejected` sorts after
/// every placement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Decision {
    Place { cpu: usize, mem: usize, sto: usize },
    Rejected,
}

impl Decision {
    pub fn colocated(node: usize) -> Self {
        Decision::Place { cpu: node, mem: node, sto: node }
    }

    pub fn is_rejected(self) -> bool {
        matches!(self, Decision::Rejected)
    }

    /// A placement that spreads the application across more than one node.
    pub fn is_split(self) -> bool {
        match self {
            Decision::Place { cpu, mem, sto } => cpu != mem || cpu != sto,
            Decision::Rejected => false,
        }
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decision::Place { cpu, mem, sto } => write!(f, "({cpu},{mem},{sto})"),
            Decision::Rejected => write!(f, "rejected"),
        }
    }
}

// Serialized as {"cpu_node": c, "mem_node": m, "sto_node": s} or the string
// "rejected".
impl Serialize for Decision {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match *self {
            Decision::Place { cpu, mem, sto } => {
                let mut s = serializer.serialize_struct("Decision", 3)?;
                s.serialize_field("cpu_node", &cpu)?;
                s.serialize_field("mem_node", &mem)?;
                s.serialize_field("sto_node", &sto)?;
                s.end()
            }
            Decision::Rejected => serializer.serialize_str("rejected"),
        }
    }
}

impl<'de> Deserialize<'de> for Decision {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct DecisionVisitor;

        impl<'de> Visitor<'de> for DecisionVisitor {
            type Value = Decision;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("\"rejected\" or {cpu_node, mem_node, sto_node}")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Decision, E> {
                if v == "rejected" {
                    Ok(Decision::Rejected)
                } else {
                    Err(E::custom(format!("unknown decision {v:?}")))
                }
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Decision, A::Error> {
                let (mut cpu, mut mem, mut sto) = (None, None, None);
                while let Some(key) = map.next_key::<String>()? {
                    match key.as_str() {
                        "cpu_node" => cpu = Some(map.next_value()?),
                        "mem_node" => mem = Some(map.next_value()?),
                        "sto_node" => sto = Some(map.next_value()?),
                        other => return Err(de::Error::custom(format!("unknown field {other:?}"))),
                    }
                }
                Ok(Decision::Place {
                    cpu: cpu.ok_or_else(|| de::Error::missing_field("cpu_node"))?,
                    mem: mem.ok_or_else(|| de::Error::missing_field("mem_node"))?,
                    sto: sto.ok_or_else(|| de::Error::missing_field("sto_node"))?,
                })
            }
        }

        deserializer.deserialize_any(DecisionVisitor)
    }
}

/// Compares decision vectors in the canonical tie-break order.
pub fn compare_decisions(a: &[Decision], b: &[Decision]) -> std::cmp::Ordering {
    a.cmp(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cmp::Ordering;

    #[test]
    fn ordering_places_rejected_last_and_triples_lexicographic() {
        let a = Decision::Place { cpu: 0, mem: 0, sto: 1 };
        let b = Decision::Place { cpu: 0, mem: 1, sto: 0 };
        let c = Decision::Place { cpu: 1, mem: 0, sto: 0 };
        assert!(a < b && b < c && c < Decision::Rejected);
        assert_eq!(
            compare_decisions(&[a, Decision::Rejected], &[a, c]),
            Ordering::Greater
        );
        assert_eq!(
            compare_decisions(&[Decision::colocated(0), b], &[Decision::colocated(1), a]),
            Ordering::Less
        );
    }

    #[test]
    fn json_round_trip() {
        let decisions = vec![
            Decision::Place { cpu: 0, mem: 2, sto: 1 },
            Decision::Rejected,
            Decision::colocated(3),
        ];
        let text = serde_json::to_string(&decisions).unwrap();
        assert!(text.contains("\"rejected\""));
        assert!(text.contains("\"cpu_node\":0"));
        let back: Vec<Decision> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, decisions);
    }

    #[test]
    fn split_detection() {
        assert!(!Decision::colocated(2).is_split());
        assert!(Decision::Place { cpu: 0, mem: 0, sto: 1 }.is_split());
        assert!(!Decision::Rejected.is_split());
    }
}
