//! Ticket assignments and the ticket file reader.

use std::collections::HashMap;
use std::io::Read;

use serde::Serialize;

use crate::distribution::{read_csv_records, InputFormat, WeightDistribution};
use crate::error::{Error, Result};

/// Non-negative integer tickets per party with a cached total.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct TicketAssignment {
    tickets: Vec<u64>,
    total: u64,
}

impl TicketAssignment {
    pub fn new(tickets: Vec<u64>) -> Result<Self> {
        let total = tickets
            .iter()
            .try_fold(0u64, |acc, &t| acc.checked_add(t))
            .ok_or(Error::TicketOverflow)?;
        Ok(TicketAssignment { tickets, total })
    }

    pub fn zeros(parties: usize) -> Self {
        TicketAssignment {
            tickets: vec![0; parties],
            total: 0,
        }
    }

    /// Total ticket count `T`.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn len(&self) -> usize {
        self.tickets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tickets.is_empty()
    }

    pub fn get(&self, party: usize) -> u64 {
        self.tickets[party]
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.tickets
    }

    /// Number of parties holding at least one ticket.
    pub fn holders(&self) -> usize {
        self.tickets.iter().filter(|&&t| t > 0).count()
    }

    pub fn max_tickets(&self) -> u64 {
        self.tickets.iter().copied().max().unwrap_or(0)
    }

    pub(crate) fn from_counts(tickets: Vec<u64>, total: u64) -> Self {
        debug_assert_eq!(tickets.iter().sum::<u64>(), total);
        TicketAssignment { tickets, total }
    }
}

/// Reads a ticket file and aligns it with `dist` by party id.
///
/// CSV: rows `id,tickets` (optional `id,tickets` header). JSON: either an
/// object mapping id to integer, or a solve report whose `tickets` field is
/// such an object. Every party of `dist` must appear exactly once.
pub fn load_tickets<R: Read>(
    reader: R,
    format: InputFormat,
    dist: &WeightDistribution,
) -> Result<TicketAssignment> {
    let rows = match format {
        InputFormat::Csv => read_csv_rows(reader)?,
        InputFormat::Json => read_json_rows(reader)?,
    };
    let mut by_id: HashMap<String, (u64, usize)> = HashMap::new();
    for (id, count, line) in rows {
        if by_id.insert(id.clone(), (count, line)).is_some() {
            return Err(Error::DuplicateId { id, line });
        }
    }
    let mut tickets = Vec::with_capacity(dist.len());
    for id in dist.ids() {
        match by_id.remove(id) {
            Some((count, _)) => tickets.push(count),
            None => {
                return Err(Error::Config(format!("ticket file has no entry for party {id:?}")))
            }
        }
    }
    if let Some((id, (_, line))) = by_id.into_iter().min_by_key(|(_, (_, line))| *line) {
        return Err(Error::Malformed {
            line,
            message: format!("party {id:?} is not in the weight distribution"),
        });
    }
    TicketAssignment::new(tickets)
}

fn read_csv_rows<R: Read>(reader: R) -> Result<Vec<(String, u64, usize)>> {
    let mut rows = Vec::new();
    for (n, (record, line)) in read_csv_records(reader)?.into_iter().enumerate() {
        if record.len() != 2 {
            return Err(Error::Malformed {
                line,
                message: format!("expected 2 fields `id,tickets`, found {}", record.len()),
            });
        }
        if n == 0
            && record[0].eq_ignore_ascii_case("id")
            && record[1].eq_ignore_ascii_case("tickets")
        {
            continue;
        }
        let count = record[1].parse::<u64>().map_err(|_| Error::Malformed {
            line,
            message: format!("ticket count {:?} is not a non-negative integer", &record[1]),
        })?;
        rows.push((record[0].to_string(), count, line));
    }
    Ok(rows)
}

fn read_json_rows<R: Read>(reader: R) -> Result<Vec<(String, u64, usize)>> {
    let value: serde_json::Value = serde_json::from_reader(reader).map_err(|e| Error::Malformed {
        line: e.line(),
        message: e.to_string(),
    })?;
    let map = match &value {
        serde_json::Value::Object(obj) => match obj.get("tickets") {
            Some(serde_json::Value::Object(inner)) => inner,
            _ => obj,
        },
        _ => {
            return Err(Error::Malformed {
                line: 1,
                message: "expected a JSON object of id -> tickets".into(),
            })
        }
    };
    map.iter()
        .enumerate()
        .map(|(i, (id, v))| {
            v.as_u64()
                .map(|count| (id.clone(), count, i + 1))
                .ok_or_else(|| Error::Malformed {
                    line: i + 1,
                    message: format!("tickets for {id:?} must be a non-negative integer"),
                })
        })
        .collect()
}
