//! Parameterized benchmark families: AT, BW, DP, TA, TL.
//!
//! Each generator is deterministic in (domain, n, k) and produces a model
//! whose base alphabet (instance indices stripped) does not depend on the
//! instance size, so feature vectors keep a fixed dimension across sizes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::lts::{CompositeModel, RawComponent, RawModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Domain {
    AT,
    BW,
    DP,
    TA,
    TL,
}

impl Domain {
    pub const ALL: [Domain; 5] = [Domain::AT, Domain::BW, Domain::DP, Domain::TA, Domain::TL];
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Domain::AT => "AT",
            Domain::BW => "BW",
            Domain::DP => "DP",
            Domain::TA => "TA",
            Domain::TL => "TL",
        };
        f.write_str(s)
    }
}

impl FromStr for Domain {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "AT" => Ok(Domain::AT),
            "BW" => Ok(Domain::BW),
            "DP" => Ok(Domain::DP),
            "TA" => Ok(Domain::TA),
            "TL" => Ok(Domain::TL),
            other => Err(format!("unknown domain `{other}` (expected AT, BW, DP, TA, or TL)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BenchmarkSpec {
    pub domain: Domain,
    pub n: u32,
    pub k: u32,
}

impl BenchmarkSpec {
    pub fn new(domain: Domain, n: u32, k: u32) -> BenchmarkSpec {
        assert!(n >= 1 && k >= 1, "benchmark parameters must satisfy n >= 1, k >= 1");
        BenchmarkSpec { domain, n, k }
    }
}

/// Deterministic model for the given instance.
pub fn generate_benchmark(spec: BenchmarkSpec) -> CompositeModel {
    let raw = generate_raw(spec);
    CompositeModel::from_raw(&raw).expect("generated benchmark must be well formed")
}

pub fn generate_raw(spec: BenchmarkSpec) -> RawModel {
    assert!(spec.n >= 1 && spec.k >= 1);
    match spec.domain {
        Domain::AT => air_traffic(spec.n, spec.k),
        Domain::BW => bidding_workflow(spec.n, spec.k),
        Domain::DP => dining_philosophers(spec.n, spec.k),
        Domain::TA => travel_agency(spec.n, spec.k),
        Domain::TL => transfer_line(spec.n, spec.k),
    }
}

fn comp(name: impl Into<String>) -> RawComponent {
    RawComponent {
        name: name.into(),
        states: Vec::new(),
        initial: String::new(),
        marked: Vec::new(),
        transitions: Vec::new(),
        controllable: None,
    }
}

impl RawComponent {
    fn state(&mut self, s: impl Into<String>) -> String {
        let s = s.into();
        if !self.states.contains(&s) {
            self.states.push(s.clone());
        }
        s
    }

    fn tr(&mut self, src: impl Into<String>, label: impl Into<String>, dst: impl Into<String>) {
        let src = self.state(src);
        let dst = self.state(dst);
        self.transitions.push((src, label.into(), dst));
    }

    fn mark(&mut self, s: impl Into<String>) {
        let s = self.state(s);
        if !self.marked.contains(&s) {
            self.marked.push(s);
        }
    }
}

/// Transfer line: n machines feeding n bounded buffers in a row. `take_i` is
/// controllable, `put_i` uncontrollable; a put into a full buffer overflows
/// into a dead state. The goal state has every machine idle, every buffer
/// empty, and at least one workpiece delivered from the last buffer.
fn transfer_line(n: u32, k: u32) -> RawModel {
    let mut components = Vec::new();
    let mut controllable = Vec::new();
    for i in 1..=n {
        let mut m = comp(format!("M{i}"));
        m.state("idle");
        m.tr("idle", format!("take_{i}"), "busy");
        m.tr("busy", format!("put_{i}"), "idle");
        m.mark("idle");
        m.initial = "idle".into();
        controllable.push(format!("take_{i}"));
        components.push(m);
    }
    for i in 1..=n {
        let mut b = comp(format!("B{i}"));
        b.state("b0");
        for level in 0..k {
            b.tr(format!("b{level}"), format!("put_{i}"), format!("b{}", level + 1));
        }
        // `over` gets no outgoing transitions: an overflow is final.
        b.tr(format!("b{k}"), format!("put_{i}"), "over");
        let drain = if i < n { format!("take_{}", i + 1) } else { "deliver".to_string() };
        for level in 1..=k {
            b.tr(format!("b{level}"), drain.clone(), format!("b{}", level - 1));
        }
        b.mark("b0");
        b.initial = "b0".into();
        components.push(b);
    }
    controllable.push("deliver".into());
    let mut t = comp("Out");
    t.tr("none", "deliver", "some");
    t.tr("some", "deliver", "some");
    t.mark("some");
    t.initial = "none".into();
    components.push(t);

    let composition = components.iter().map(|c| c.name.clone()).collect();
    RawModel { components, controllable, composition }
}

/// Dining philosophers: philosopher i needs the forks {i, (i+1) mod n} (a
/// single fork when n = 1), performs k controllable etiquette steps before an
/// uncontrollable eat, then releases. Marked once every philosopher has eaten
/// at least once and is thinking, with all forks free.
fn dining_philosophers(n: u32, k: u32) -> RawModel {
    let mut components = Vec::new();
    let mut controllable = Vec::new();
    for i in 0..n {
        let mut forks = vec![i, (i + 1) % n];
        forks.dedup();
        let mut p = comp(format!("P{i}"));
        // Two copies of the acquire/eat/release cycle: before the first meal
        // (entered at t0, unmarked) and after it (looping at t1, marked).
        for (tag, start, end) in [("a", "t0", "t1"), ("b", "t1", "t1")] {
            let mut cur = start.to_string();
            for (fi, f) in forks.iter().enumerate() {
                let next = format!("{tag}_hold{fi}");
                p.tr(cur.clone(), format!("take_{i}_{f}"), next.clone());
                cur = next;
            }
            for j in 1..=k {
                let next = format!("{tag}_et{j}");
                p.tr(cur.clone(), format!("et_{i}_{j}"), next.clone());
                cur = next;
            }
            let fed = format!("{tag}_fed");
            p.tr(cur.clone(), format!("eat_{i}"), fed.clone());
            cur = fed;
            for (fi, f) in forks.iter().enumerate() {
                let next = if fi + 1 == forks.len() {
                    end.to_string()
                } else {
                    format!("{tag}_rel{fi}")
                };
                p.tr(cur.clone(), format!("rel_{i}_{f}"), next.clone());
                cur = next;
            }
        }
        p.mark("t1");
        p.initial = "t0".into();
        for f in &forks {
            controllable.push(format!("take_{i}_{f}"));
            controllable.push(format!("rel_{i}_{f}"));
        }
        for j in 1..=k {
            controllable.push(format!("et_{i}_{j}"));
        }
        components.push(p);
    }
    for f in 0..n {
        let mut fork = comp(format!("F{f}"));
        fork.state("free");
        for i in 0..n {
            let uses = f == i || f == (i + 1) % n;
            if uses {
                fork.tr("free", format!("take_{i}_{f}"), "taken");
                fork.tr("taken", format!("rel_{i}_{f}"), "free");
            }
        }
        fork.mark("free");
        fork.initial = "free".into();
        components.push(fork);
    }
    controllable.sort();
    controllable.dedup();
    let composition = components.iter().map(|c| c.name.clone()).collect();
    RawModel { components, controllable, composition }
}

/// Air traffic: n planes request landing (uncontrollable), get assigned one of
/// k altitude levels, descend level by level and land. Two planes on one level
/// crash that level for good. A plane that has not requested counts as done.
fn air_traffic(n: u32, k: u32) -> RawModel {
    let mut components = Vec::new();
    let mut controllable = Vec::new();
    for i in 1..=n {
        let mut p = comp(format!("A{i}"));
        p.state("away");
        p.tr("away", format!("req_{i}"), "wait");
        for l in 1..=k {
            p.tr("wait", format!("assign_{i}_{l}"), format!("fly{l}"));
            controllable.push(format!("assign_{i}_{l}"));
        }
        for l in 2..=k {
            p.tr(format!("fly{l}"), format!("down_{i}_{l}"), format!("fly{}", l - 1));
            controllable.push(format!("down_{i}_{l}"));
        }
        // Final descent leaves level 1 before touchdown, so `down` exists at
        // every k and the normalized alphabet is size-independent.
        p.tr("fly1", format!("down_{i}_1"), "final");
        controllable.push(format!("down_{i}_1"));
        p.tr("final", format!("land_{i}"), "ground");
        controllable.push(format!("land_{i}"));
        p.mark("away");
        p.mark("ground");
        p.initial = "away".into();
        components.push(p);
    }
    for l in 1..=k {
        let mut lv = comp(format!("L{l}"));
        lv.state("empty");
        let mut enter: Vec<String> = (1..=n).map(|i| format!("assign_{i}_{l}")).collect();
        if l < k {
            enter.extend((1..=n).map(|i| format!("down_{i}_{}", l + 1)));
        }
        let leave: Vec<String> = (1..=n).map(|i| format!("down_{i}_{l}")).collect();
        // `crash` gets no outgoing transitions: a collision is final.
        for e in &enter {
            lv.tr("empty", e.clone(), "busy");
            lv.tr("busy", e.clone(), "crash");
        }
        for x in &leave {
            lv.tr("busy", x.clone(), "empty");
        }
        lv.mark("empty");
        lv.initial = "empty".into();
        components.push(lv);
    }
    let composition = components.iter().map(|c| c.name.clone()).collect();
    RawModel { components, controllable, composition }
}

/// Bidding workflow: n documents pass k review steps behind a single shared
/// reviewer. Accept/reject outcomes are uncontrollable; a rejected document is
/// returned. Marked when every document is finally accepted or returned.
fn bidding_workflow(n: u32, k: u32) -> RawModel {
    let mut components = Vec::new();
    let mut controllable = Vec::new();
    for i in 1..=n {
        let mut d = comp(format!("D{i}"));
        d.state("p1");
        for j in 1..=k {
            d.tr(format!("p{j}"), format!("sub_{i}_{j}"), format!("rev{j}"));
            controllable.push(format!("sub_{i}_{j}"));
            let accept_target = if j == k { "acc".to_string() } else { format!("p{}", j + 1) };
            d.tr(format!("rev{j}"), format!("ok_{i}_{j}"), accept_target);
            d.tr(format!("rev{j}"), format!("no_{i}_{j}"), "rej");
        }
        d.tr("rej", format!("ret_{i}"), "done");
        controllable.push(format!("ret_{i}"));
        d.mark("acc");
        d.mark("done");
        d.initial = "p1".into();
        components.push(d);
    }
    let mut r = comp("R");
    r.state("free");
    for i in 1..=n {
        for j in 1..=k {
            r.tr("free", format!("sub_{i}_{j}"), "busy");
            r.tr("busy", format!("ok_{i}_{j}"), "free");
            r.tr("busy", format!("no_{i}_{j}"), "free");
        }
    }
    r.mark("free");
    r.initial = "free".into();
    components.push(r);
    let composition = components.iter().map(|c| c.name.clone()).collect();
    RawModel { components, controllable, composition }
}

/// Travel agency: n services are queried in k controllable steps, reserved,
/// then committed or cancelled. Availability responses are uncontrollable.
/// Committing anywhere while an unresolved failure is pending is a dead end.
fn travel_agency(n: u32, k: u32) -> RawModel {
    let mut components = Vec::new();
    let mut controllable = Vec::new();
    for i in 1..=n {
        let mut s = comp(format!("S{i}"));
        s.state("q0");
        for j in 1..=k {
            s.tr(format!("q{}", j - 1), format!("qry_{i}_{j}"), format!("q{j}"));
            controllable.push(format!("qry_{i}_{j}"));
        }
        s.tr(format!("q{k}"), format!("rsv_{i}"), "pend");
        s.tr("pend", format!("yes_{i}"), "held");
        s.tr("pend", format!("no_{i}"), "fail");
        s.tr("held", format!("cmt_{i}"), "comm");
        s.tr("held", format!("cxl_{i}"), "cncl");
        s.tr("fail", format!("cxl_{i}"), "cncl");
        controllable.push(format!("rsv_{i}"));
        controllable.push(format!("cmt_{i}"));
        controllable.push(format!("cxl_{i}"));
        s.mark("comm");
        s.mark("cncl");
        s.initial = "q0".into();
        components.push(s);
    }
    let mut g = comp("G");
    g.state("ok");
    for i in 1..=n {
        g.tr("ok", format!("no_{i}"), "dirty");
        g.tr("dirty", format!("no_{i}"), "dirty");
        g.tr("ok", format!("cmt_{i}"), "ok");
        g.tr("dirty", format!("cmt_{i}"), "crash");
        g.tr("ok", format!("cxl_{i}"), "ok");
        g.tr("dirty", format!("cxl_{i}"), "ok");
    }
    // `crash` gets no outgoing transitions: a commit issued while a failure
    // is unresolved is final.
    g.mark("ok");
    g.initial = "ok".into();
    components.push(g);
    let composition = components.iter().map(|c| c.name.clone()).collect();
    RawModel { components, controllable, composition }
}
