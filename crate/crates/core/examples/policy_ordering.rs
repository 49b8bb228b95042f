// Copyright 2026 The clusterfpm Authors. Licensed under Apache-2.0.

//! Drive each queue policy directly, single-threaded, to show the order the
//! owner sees and what a thief takes.
//!
//! Run with `cargo run --example policy_ordering`.

use clusterfpm::policy::PolicyQueue;
use clusterfpm::task::Schedulable;
use clusterfpm::{Itemset, PolicyKind, TaskAttributes, TaskQueue};

struct Job {
    name: String,
    attrs: TaskAttributes,
}

impl Schedulable for Job {
    fn attrs(&self) -> &TaskAttributes {
        &self.attrs
    }
}

const SPECS: [(&[u32], i64); 6] = [
    (&[1, 2, 3], 5),
    (&[4, 7, 9], 1),
    (&[1, 2, 8], 3),
    (&[4, 7, 2], 6),
    (&[1, 2, 5], 2),
    (&[4, 7, 0], 4),
];

fn jobs(kind: PolicyKind) -> impl Iterator<Item = Job> {
    SPECS.iter().map(move |&(items, rank)| {
        let set = Itemset::new(items.iter().copied());
        let (name, attrs) = match kind {
            PolicyKind::Priority => (format!("r{rank}"), TaskAttributes::rank(rank)),
            _ => (format!("{:?}", set.items()), TaskAttributes::itemset(set)),
        };
        Job { name, attrs }
    })
}

fn main() {
    for kind in PolicyKind::all() {
        let kind = kind.with_buckets(16).unwrap();
        let q: PolicyQueue<Job> = kind.build().unwrap();
        for j in jobs(kind) {
            q.put(j).unwrap();
        }
        let batch = q.steal();
        let stolen: Vec<_> = batch.tasks.iter().map(|j| j.name.as_str()).collect();
        let mut owner = Vec::new();
        while let Some(j) = q.get() {
            owner.push(j.name);
        }
        println!("{kind}");
        match batch.bucket {
            Some(b) => println!("  thief took bucket {b}: {stolen:?}"),
            None => println!("  thief took {stolen:?}"),
        }
        println!("  owner then ran {owner:?}");
    }
}
