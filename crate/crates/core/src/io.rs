//! JSON documents for instances, schedules, reports and release/deadline
//! instances. Rationals are written as integers when integral and as
//! `"num/den"` strings otherwise; both forms are accepted on input.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::model::{BranchTask, Instance, Placement, Schedule};
use crate::report::SolveReport;
use crate::rtd::{RtdInstance, RtdTask};
use crate::scalar::Scalar;
use crate::Rational;

/// Serde wrapper for an exact rational.
#[derive(Debug, Clone, PartialEq)]
pub struct Exact(pub Rational);

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.denom().is_one() {
            if let Some(i) = self.0.numer().to_i64() {
                return ser.serialize_i64(i);
            }
        }
        ser.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        struct ExactVisitor;

        impl Visitor<'_> for ExactVisitor {
            type Value = Exact;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a \"num/den\" string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Exact, E> {
                Ok(Exact(Rational::from_integer(v.into())))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Exact, E> {
                Ok(Exact(Rational::from_integer(v.into())))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Exact, E> {
                Err(E::custom(format!(
                    "floating-point value {v} is not exact; write it as \"num/den\""
                )))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Exact, E> {
                parse_rational(v).map(Exact).map_err(E::custom)
            }
        }

        de.deserialize_any(ExactVisitor)
    }
}

/// Parses `"7"`, `"-3"` or `"3/2"` into an exact rational.
pub fn parse_rational(text: &str) -> std::result::Result<Rational, String> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| format!("invalid rational {text:?}"))?;
    let den = BigInt::from_str(den).map_err(|_| format!("invalid rational {text:?}"))?;
    if den.is_zero() {
        return Err(format!("zero denominator in {text:?}"));
    }
    Ok(Rational::new(num, den))
}

pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskDoc {
    pub id: String,
    pub p: Exact,
    #[serde(default = "zero")]
    pub gin: Exact,
    #[serde(default = "zero")]
    pub gout: Exact,
}

fn zero() -> Exact {
    Exact(Rational::zero())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDoc {
    pub p_src: Exact,
    pub p_sink: Exact,
    pub tasks: Vec<TaskDoc>,
    pub speeds: Vec<Exact>,
    /// Group label per processor; communication inside a group is free.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub groups: Option<Vec<u32>>,
}

impl From<&Instance<Rational>> for InstanceDoc {
    fn from(inst: &Instance<Rational>) -> Self {
        InstanceDoc {
            p_src: Exact(inst.p_src.clone()),
            p_sink: Exact(inst.p_sink.clone()),
            tasks: inst
                .tasks
                .iter()
                .map(|t| TaskDoc {
                    id: t.id.clone(),
                    p: Exact(t.p.clone()),
                    gin: Exact(t.gin.clone()),
                    gout: Exact(t.gout.clone()),
                })
                .collect(),
            speeds: inst.speeds.iter().cloned().map(Exact).collect(),
            groups: inst.groups.clone(),
        }
    }
}

impl TryFrom<InstanceDoc> for Instance<Rational> {
    type Error = Error;

    fn try_from(doc: InstanceDoc) -> Result<Self> {
        let inst = Instance {
            tasks: doc
                .tasks
                .into_iter()
                .map(|t| BranchTask::new(t.id, t.p.0, t.gin.0, t.gout.0))
                .collect(),
            p_src: doc.p_src.0,
            p_sink: doc.p_sink.0,
            speeds: doc.speeds.into_iter().map(|s| s.0).collect(),
            groups: doc.groups,
        };
        inst.check()?;
        Ok(inst)
    }
}

fn malformed(e: serde_json::Error) -> Error {
    Error::Malformed {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

fn to_pretty<D: Serialize>(doc: &D) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("documents serialize");
    text.push('\n');
    text
}

pub fn parse_instance(text: &str) -> Result<Instance<Rational>> {
    let doc: InstanceDoc = serde_json::from_str(text).map_err(malformed)?;
    doc.try_into()
}

pub fn serialize_instance(inst: &Instance<Rational>) -> String {
    to_pretty(&InstanceDoc::from(inst))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlacementDoc {
    pub id: String,
    pub proc: usize,
    pub index_on_proc: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleDoc {
    pub m_src: usize,
    pub m_sink: usize,
    pub placements: Vec<PlacementDoc>,
}

impl ScheduleDoc {
    pub fn from_placement<T: Scalar>(inst: &Instance<T>, placement: &Placement) -> Self {
        let mut placements = Vec::new();
        for (m, order) in placement.orders.iter().enumerate() {
            for (k, &j) in order.iter().enumerate() {
                placements.push(PlacementDoc {
                    id: inst.tasks[j].id.clone(),
                    proc: m,
                    index_on_proc: k,
                });
            }
        }
        ScheduleDoc {
            m_src: placement.m_src,
            m_sink: placement.m_sink,
            placements,
        }
    }

    /// Resolves task ids against `inst` into a placement.
    pub fn to_placement<T: Scalar>(&self, inst: &Instance<T>) -> Result<Placement> {
        let index: HashMap<&str, usize> = inst
            .tasks
            .iter()
            .enumerate()
            .map(|(j, t)| (t.id.as_str(), j))
            .collect();
        let num_procs = inst.num_procs();
        for (field, m) in [("m_src", self.m_src), ("m_sink", self.m_sink)] {
            if m >= num_procs {
                return Err(Error::invalid(
                    field,
                    format!("processor {m} does not exist"),
                ));
            }
        }
        let mut slots: Vec<Vec<Option<usize>>> = vec![Vec::new(); num_procs];
        let mut placed = vec![false; inst.num_tasks()];
        for (k, p) in self.placements.iter().enumerate() {
            let field = format!("placements[{k}]");
            let j = *index
                .get(p.id.as_str())
                .ok_or_else(|| Error::invalid(&field, format!("unknown task id {:?}", p.id)))?;
            if placed[j] {
                return Err(Error::invalid(
                    &field,
                    format!("task {:?} placed twice", p.id),
                ));
            }
            placed[j] = true;
            if p.proc >= num_procs {
                return Err(Error::invalid(
                    &field,
                    format!("processor {} does not exist", p.proc),
                ));
            }
            let order = &mut slots[p.proc];
            if order.len() <= p.index_on_proc {
                order.resize(p.index_on_proc + 1, None);
            }
            if order[p.index_on_proc].is_some() {
                return Err(Error::invalid(
                    &field,
                    format!(
                        "position {} on processor {} taken twice",
                        p.index_on_proc, p.proc
                    ),
                ));
            }
            order[p.index_on_proc] = Some(j);
        }
        if let Some(j) = placed.iter().position(|&b| !b) {
            return Err(Error::invalid(
                "placements",
                format!("task {:?} is not placed", inst.tasks[j].id),
            ));
        }
        let mut orders = Vec::with_capacity(num_procs);
        for (m, order) in slots.into_iter().enumerate() {
            if order.iter().any(Option::is_none) {
                return Err(Error::invalid(
                    "placements",
                    format!("positions on processor {m} are not contiguous from 0"),
                ));
            }
            orders.push(order.into_iter().flatten().collect());
        }
        Ok(Placement {
            m_src: self.m_src,
            m_sink: self.m_sink,
            orders,
        })
    }
}

pub fn parse_schedule<T: Scalar>(inst: &Instance<T>, text: &str) -> Result<Placement> {
    let doc: ScheduleDoc = serde_json::from_str(text).map_err(malformed)?;
    doc.to_placement(inst)
}

pub fn serialize_schedule<T: Scalar>(inst: &Instance<T>, placement: &Placement) -> String {
    to_pretty(&ScheduleDoc::from_placement(inst, placement))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GuaranteeDoc {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<Exact>,
}

/// On-disk form of a [`SolveReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub algorithm: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance_hash: Option<String>,
    pub makespan: Exact,
    pub makespan_float: f64,
    pub guarantee: GuaranteeDoc,
    pub schedule: ScheduleDoc,
    /// Start time per task id, plus `"<source>"` and `"<sink>"`.
    pub start_times: BTreeMap<String, Exact>,
    pub notes: BTreeMap<String, String>,
}

impl ReportDoc {
    pub fn new(inst: &Instance<Rational>, report: &SolveReport<Rational>) -> Self {
        let sched: &Schedule<Rational> = &report.schedule;
        let mut start_times: BTreeMap<String, Exact> = inst
            .tasks
            .iter()
            .zip(&sched.starts)
            .map(|(t, s)| (t.id.clone(), Exact(s.clone())))
            .collect();
        start_times.insert("<source>".into(), Exact(sched.source_start.clone()));
        start_times.insert("<sink>".into(), Exact(sched.sink_start.clone()));
        ReportDoc {
            algorithm: report.algorithm.name().to_string(),
            instance_hash: None,
            makespan: Exact(report.makespan.clone()),
            makespan_float: report.makespan.to_f64_lossy(),
            guarantee: GuaranteeDoc {
                kind: report.guarantee.kind().to_string(),
                bound: report.guarantee.bound().cloned().map(Exact),
            },
            schedule: ScheduleDoc::from_placement(inst, &sched.placement()),
            start_times,
            notes: report.notes.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        to_pretty(self)
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(malformed)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RtdTaskDoc {
    pub id: String,
    pub p: Exact,
    pub r: Exact,
    pub d: Exact,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RtdInstanceDoc {
    pub tasks: Vec<RtdTaskDoc>,
    pub speeds: Vec<Exact>,
}

pub fn serialize_rtd(rtd: &RtdInstance<Rational>) -> String {
    to_pretty(&RtdInstanceDoc {
        tasks: rtd
            .tasks
            .iter()
            .map(|t| RtdTaskDoc {
                id: t.id.clone(),
                p: Exact(t.p.clone()),
                r: Exact(t.r.clone()),
                d: Exact(t.d.clone()),
            })
            .collect(),
        speeds: rtd.speeds.iter().cloned().map(Exact).collect(),
    })
}

pub fn parse_rtd(text: &str) -> Result<RtdInstance<Rational>> {
    let doc: RtdInstanceDoc = serde_json::from_str(text).map_err(malformed)?;
    let rtd = RtdInstance {
        tasks: doc
            .tasks
            .into_iter()
            .map(|t| RtdTask {
                id: t.id,
                p: t.p.0,
                r: t.r.0,
                d: t.d.0,
            })
            .collect(),
        speeds: doc.speeds.into_iter().map(|s| s.0).collect(),
    };
    rtd.check()?;
    Ok(rtd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::canonicalize;

    const DOC: &str = r#"{
        "p_src": 1, "p_sink": "3/2",
        "tasks": [{"id": "a", "p": 2, "gin": "1/3", "gout": 0}, {"id": "b", "p": "5/2", "gin": 1, "gout": 4}],
        "speeds": [1, "3/2"]
    }"#;

    #[test]
    fn parses_exact_rationals() {
        let inst = parse_instance(DOC).unwrap();
        assert_eq!(inst.p_sink, Rational::new(3.into(), 2.into()));
        assert_eq!(inst.tasks[0].gin, Rational::new(1.into(), 3.into()));
        assert_eq!(inst.speeds[1], Rational::new(3.into(), 2.into()));
    }

    #[test]
    fn instance_round_trip() {
        let inst = parse_instance(DOC).unwrap();
        let text = serialize_instance(&inst);
        assert_eq!(parse_instance(&text).unwrap(), inst);
        assert_eq!(serialize_instance(&parse_instance(&text).unwrap()), text);
    }

    #[test]
    fn rejects_zero_speed_with_field() {
        let err =
            parse_instance(r#"{"p_src":1,"p_sink":1,"tasks":[],"speeds":["0"]}"#).unwrap_err();
        assert!(
            matches!(err, Error::InvalidInstance { ref field, .. } if field == "speeds[0]"),
            "{err}"
        );
    }

    #[test]
    fn rejects_floats_and_syntax_errors_with_position() {
        let err = parse_instance("{\"p_src\": 1.5,\n \"p_sink\":1,\"tasks\":[],\"speeds\":[1]}")
            .unwrap_err();
        assert!(matches!(err, Error::Malformed { line: 1, .. }), "{err}");
        let err = parse_instance("{\n\"p_src\": 1,\n\"p_sink\": }").unwrap_err();
        assert!(matches!(err, Error::Malformed { line: 3, .. }), "{err}");
    }

    #[test]
    fn rejects_duplicate_ids() {
        let err = parse_instance(
            r#"{"p_src":1,"p_sink":1,"tasks":[{"id":"x","p":1},{"id":"x","p":1}],"speeds":[1]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidInstance { ref field, .. } if field == "tasks[1].id"));
    }

    #[test]
    fn schedule_round_trip_and_errors() {
        let inst = parse_instance(DOC).unwrap();
        let placement = Placement {
            m_src: 0,
            m_sink: 1,
            orders: vec![vec![1], vec![0]],
        };
        let text = serialize_schedule(&inst, &placement);
        assert_eq!(parse_schedule(&inst, &text).unwrap(), placement);
        assert!(canonicalize(&inst, &placement).is_ok());

        let gap = r#"{"m_src":0,"m_sink":0,"placements":[{"id":"a","proc":0,"index_on_proc":1},{"id":"b","proc":0,"index_on_proc":0},{"id":"a","proc":1,"index_on_proc":0}]}"#;
        assert!(
            matches!(parse_schedule(&inst, gap), Err(Error::InvalidInstance { ref field, .. }) if field == "placements[2]")
        );
        let missing =
            r#"{"m_src":0,"m_sink":0,"placements":[{"id":"a","proc":0,"index_on_proc":0}]}"#;
        assert!(parse_schedule(&inst, missing).is_err());
    }

    #[test]
    fn rational_text_forms() {
        assert_eq!(
            parse_rational("6/4").unwrap(),
            Rational::new(3.into(), 2.into())
        );
        assert_eq!(format_rational(&Rational::new(6.into(), 4.into())), "3/2");
        assert_eq!(format_rational(&Rational::from_integer(7.into())), "7");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
