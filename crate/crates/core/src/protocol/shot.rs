//! One complete protocol execution on the event engine: distribution,
//! measurement, the commander's orders and three classical rounds.

use rand::seq::index::sample;
use rand::Rng;

use super::{
    build_command_vector, lieutenant_step, BitVector, CheckTolerances, Decision, IndexScheme,
    LieutenantState, ProtocolError, RandomTraitor, RoundMessage, TraitorStrategy, TraitorView,
};
use crate::des::{apply_hooks, EventQueue, LossMode, RngStream, TraceEntry};
use crate::hardware::{build_network, HardwareProfile, Network};
use crate::quantum::{make_state, measure_z_all, DensityMatrix, StateKind};
use crate::Error;

const PURPOSE_QUANTUM: u64 = 0;
const PURPOSE_ORDERS: u64 = 1;
const PURPOSE_PLACEMENT: u64 = 2;
const PURPOSE_STRATEGY: u64 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraitorPlacement {
    /// A uniformly random subset of lieutenants per shot.
    Random,
    /// Lieutenants `0..t`.
    First,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShotConfig {
    pub n: usize,
    /// Number of traitorous lieutenants.
    pub t: usize,
    pub m: usize,
    pub profile: HardwareProfile,
    pub commander_loyal: bool,
    pub tolerances: CheckTolerances,
    /// Latency of each classical message phase, seconds.
    pub classical_delay: f64,
    pub placement: TraitorPlacement,
}

impl ShotConfig {
    pub fn new(n: usize, t: usize, m: usize) -> Self {
        Self {
            n,
            t,
            m,
            profile: HardwareProfile::noiseless(),
            commander_loyal: true,
            tolerances: CheckTolerances::default(),
            classical_delay: 0.0,
            placement: TraitorPlacement::Random,
        }
    }

    pub fn scheme(&self) -> Result<IndexScheme, ProtocolError> {
        let scheme = IndexScheme::new(self.n, self.m)?;
        if self.t >= self.n {
            return Err(ProtocolError::InvalidConfig(format!(
                "traitor count {} must be below player count {}",
                self.t, self.n
            )));
        }
        if !(self.classical_delay >= 0.0) {
            return Err(ProtocolError::InvalidConfig(format!(
                "classical delay {} must be non-negative",
                self.classical_delay
            )));
        }
        Ok(scheme)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LieutenantRecord {
    pub id: usize,
    pub loyal: bool,
    pub decision: Decision,
    pub sent_order: u8,
    pub error: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShotOutcome {
    pub run: usize,
    pub shot: usize,
    pub commander_loyal: bool,
    pub lieutenants: Vec<LieutenantRecord>,
    pub rng_path: Vec<u64>,
    /// Bit-vector checks that passed only because nothing was revealed.
    pub vacuous_bv_checks: usize,
    pub lost_qubits: usize,
    pub heralded_retries: usize,
    pub end_time: f64,
}

impl ShotOutcome {
    pub fn orders(&self) -> Vec<u8> {
        self.lieutenants.iter().map(|l| l.sent_order).collect()
    }

    pub fn loyal(&self) -> impl Iterator<Item = &LieutenantRecord> {
        self.lieutenants.iter().filter(|l| l.loyal)
    }

    pub fn has_error(&self) -> bool {
        self.loyal().any(|l| l.error)
    }
}

#[derive(Debug)]
enum ShotEvent {
    Emit { index: usize },
    Arrive { index: usize, node: usize },
    Orders,
    Round(u8),
}

/// A qubit's slot inside the state it still shares; `None` once lost.
#[derive(Debug, Clone, Copy)]
struct Held {
    node: usize,
    pos: Option<usize>,
}

#[derive(Debug)]
struct InFlight {
    state: Option<DensityMatrix>,
    qubits: Vec<Held>,
}

#[derive(Debug, Default)]
struct Pending {
    systems: Vec<InFlight>,
    awaiting: usize,
}

enum Role {
    Loyal(LieutenantState),
    Traitor(Box<dyn TraitorStrategy>, TraitorView),
}

struct Shot<'a> {
    config: &'a ShotConfig,
    scheme: IndexScheme,
    network: Network,
    quantum_rng: RngStream,
    stream: RngStream,
    traitors: Vec<bool>,
    pending: Vec<Pending>,
    remaining: usize,
    records: Vec<BitVector>,
    orders: Vec<u8>,
    roles: Vec<Role>,
    log: Vec<RoundMessage>,
    lost_qubits: usize,
    heralded_retries: usize,
}

pub fn run_shot(config: &ShotConfig, seed: u64) -> Result<ShotOutcome, Error> {
    run_shot_with_stream(config, RngStream::new(seed))
}

pub fn run_shot_with_stream(config: &ShotConfig, stream: RngStream) -> Result<ShotOutcome, Error> {
    Ok(execute(config, stream, false)?.0)
}

/// Same as [`run_shot`] but also returns the engine's event trace.
pub fn run_shot_traced(
    config: &ShotConfig,
    stream: RngStream,
) -> Result<(ShotOutcome, Vec<TraceEntry>), Error> {
    execute(config, stream, true)
}

fn execute(
    config: &ShotConfig,
    stream: RngStream,
    traced: bool,
) -> Result<(ShotOutcome, Vec<TraceEntry>), Error> {
    let scheme = config.scheme()?;
    let network = build_network(&config.profile, &scheme)?;
    let n = scheme.players();
    let distributor = network.distributor() as u64;

    let lieutenants = scheme.lieutenants();
    let mut traitors = vec![false; lieutenants];
    match config.placement {
        TraitorPlacement::First => traitors[..config.t].iter_mut().for_each(|t| *t = true),
        TraitorPlacement::Random => {
            let mut rng = stream.fork(distributor).fork(PURPOSE_PLACEMENT);
            for i in sample(&mut rng, lieutenants, config.t) {
                traitors[i] = true;
            }
        }
    }

    let mut shot = Shot {
        config,
        scheme,
        quantum_rng: stream.fork(distributor).fork(PURPOSE_QUANTUM),
        stream: stream.clone(),
        network,
        traitors,
        pending: (0..scheme.stream_len()).map(|_| Pending::default()).collect(),
        remaining: scheme.stream_len(),
        records: vec![BitVector::zeros(scheme.stream_len()); n],
        orders: Vec::new(),
        roles: Vec::new(),
        log: Vec::new(),
        lost_qubits: 0,
        heralded_retries: 0,
    };

    let mut queue = EventQueue::new();
    if traced {
        queue = queue.with_trace();
    }
    for index in 0..scheme.stream_len() {
        queue.schedule(0.0, ShotEvent::Emit { index })?;
    }
    let end_time = queue.run_until_idle(|q, ev| shot.handle(q, ev.payload))?;

    let mut vacuous = 0;
    let records = shot
        .roles
        .iter()
        .enumerate()
        .map(|(i, role)| {
            let sent_order = shot.orders[i];
            let (loyal, decision) = match role {
                Role::Loyal(s) => {
                    vacuous += s.vacuous_bv_checks();
                    let d = s.decision(3).ok_or(ProtocolError::OutOfOrder { round: 3 })?;
                    (true, d)
                }
                Role::Traitor(..) => (false, Decision::Abort),
            };
            let error = loyal
                && if config.commander_loyal {
                    decision != Decision::from_bit(sent_order)
                } else {
                    decision != Decision::Abort
                };
            Ok(LieutenantRecord {
                id: i,
                loyal,
                decision,
                sent_order,
                error,
            })
        })
        .collect::<Result<Vec<_>, ProtocolError>>()?;
    if records.len() != lieutenants {
        return Err(ProtocolError::OutOfOrder { round: 0 }.into());
    }

    let trace = queue.trace().map(<[_]>::to_vec).unwrap_or_default();
    Ok((
        ShotOutcome {
            run: 0,
            shot: 0,
            commander_loyal: config.commander_loyal,
            lieutenants: records,
            rng_path: stream.path().to_vec(),
            vacuous_bv_checks: vacuous,
            lost_qubits: shot.lost_qubits,
            heralded_retries: shot.heralded_retries,
            end_time,
        },
        trace,
    ))
}

impl Shot<'_> {
    fn handle(&mut self, queue: &mut EventQueue<ShotEvent>, event: ShotEvent) -> Result<(), Error> {
        match event {
            ShotEvent::Emit { index } => self.emit(queue, index),
            ShotEvent::Arrive { index, node } => {
                debug_assert!(node < self.network.players);
                let pending = &mut self.pending[index];
                pending.awaiting -= 1;
                if pending.awaiting == 0 {
                    self.measure(index)?;
                    self.remaining -= 1;
                    if self.remaining == 0 {
                        queue.schedule_in(self.config.classical_delay, ShotEvent::Orders)?;
                    }
                }
                Ok(())
            }
            ShotEvent::Orders => {
                self.issue_orders()?;
                queue.schedule_in(self.config.classical_delay, ShotEvent::Round(1))?;
                Ok(())
            }
            ShotEvent::Round(r) => {
                self.round(r)?;
                if r < 3 {
                    queue.schedule_in(self.config.classical_delay, ShotEvent::Round(r + 1))?;
                }
                Ok(())
            }
        }
    }

    /// Sends one qubit of `system` over its node's link.
    fn transmit(&mut self, system: &mut InFlight, which: usize) -> Result<(), Error> {
        let held = system.qubits[which];
        let (Some(state), Some(pos)) = (system.state.take(), held.pos) else {
            return Ok(());
        };
        let link = &self.network.links[held.node];
        let (rest, lost) =
            apply_hooks(&link.hooks, link.loss_mode, state, pos, &mut self.quantum_rng)?;
        system.state = rest;
        if lost {
            self.lost_qubits += 1;
            system.qubits[which].pos = None;
            for q in system.qubits.iter_mut() {
                if let Some(p) = q.pos.as_mut() {
                    if *p > pos {
                        *p -= 1;
                    }
                }
            }
        }
        Ok(())
    }

    fn emit(&mut self, queue: &mut EventQueue<ShotEvent>, index: usize) -> Result<(), Error> {
        let lieutenant = self.scheme.slot(index);
        let pair_node = Network::lieutenant_node(lieutenant);
        let mut systems = Vec::with_capacity(self.scheme.lieutenants());
        systems.push(InFlight {
            state: Some(make_state(StateKind::PsiPlus)),
            qubits: vec![
                Held { node: Network::commander_node(), pos: Some(0) },
                Held { node: pair_node, pos: Some(1) },
            ],
        });
        for other in (0..self.scheme.lieutenants()).filter(|&i| i != lieutenant) {
            systems.push(InFlight {
                state: Some(make_state(StateKind::Plus)),
                qubits: vec![Held { node: Network::lieutenant_node(other), pos: Some(0) }],
            });
        }

        let mut any_lost = false;
        for system in systems.iter_mut() {
            for which in 0..system.qubits.len() {
                self.transmit(system, which)?;
            }
            any_lost |= system.qubits.iter().any(|q| q.pos.is_none());
        }

        if any_lost && self.network.loss_mode == LossMode::Heralded {
            // The receiver learns of the loss once the photon is overdue.
            self.heralded_retries += 1;
            let herald = self.network.links[pair_node].delay;
            queue.schedule_in(herald, ShotEvent::Emit { index })?;
            return Ok(());
        }

        let mut awaiting = 0;
        for system in &systems {
            for q in &system.qubits {
                queue.schedule_in(
                    self.network.links[q.node].delay,
                    ShotEvent::Arrive { index, node: q.node },
                )?;
                awaiting += 1;
            }
        }
        self.pending[index] = Pending { systems, awaiting };
        Ok(())
    }

    fn measure(&mut self, index: usize) -> Result<(), Error> {
        let systems = std::mem::take(&mut self.pending[index].systems);
        for system in systems {
            let mut state = system.state;
            for q in &system.qubits {
                if let (Some(s), Some(pos)) = (state.take(), q.pos) {
                    let hooks = &self.network.measurement_hooks[q.node];
                    let (s, _) =
                        apply_hooks(hooks, LossMode::None, s, pos, &mut self.quantum_rng)?;
                    state = s;
                } else if state.is_none() {
                    break;
                }
            }
            let outcome = state.map(|s| measure_z_all(s, &mut self.quantum_rng));
            for q in &system.qubits {
                let bit = match (q.pos, &outcome) {
                    (Some(pos), Some(out)) => out.bits[pos],
                    _ => self.network.lost_bit,
                };
                self.records[q.node].set(index, bit);
            }
        }
        Ok(())
    }

    fn issue_orders(&mut self) -> Result<(), Error> {
        let mut rng = self.stream.fork(Network::commander_node() as u64).fork(PURPOSE_ORDERS);
        let lieutenants = self.scheme.lieutenants();
        self.orders = if self.config.commander_loyal {
            vec![rng.random_range(0..2u8); lieutenants]
        } else {
            (0..lieutenants).map(|_| rng.random_range(0..2u8)).collect()
        };
        let commander_record = &self.records[Network::commander_node()];
        for i in 0..lieutenants {
            let order = self.orders[i];
            let vector = build_command_vector(commander_record, &self.scheme, i, order)?;
            let record = self.records[Network::lieutenant_node(i)].clone();
            let role = if self.traitors[i] {
                let rng = self
                    .stream
                    .fork(Network::lieutenant_node(i) as u64)
                    .fork(PURPOSE_STRATEGY);
                Role::Traitor(
                    Box::new(RandomTraitor::new(rng)),
                    TraitorView { id: i, record, order, vector },
                )
            } else {
                Role::Loyal(LieutenantState::new(i, self.scheme, record, order, vector))
            };
            self.roles.push(role);
        }
        Ok(())
    }

    fn round(&mut self, round: u8) -> Result<(), Error> {
        let tol = self.config.tolerances;
        let mut outbox = Vec::with_capacity(self.roles.len());
        for role in self.roles.iter_mut() {
            match role {
                Role::Loyal(state) => {
                    let (_, msg) = lieutenant_step(state, round, &self.log, &tol)?;
                    outbox.extend(msg);
                }
                Role::Traitor(strategy, view) => {
                    if round < 3 {
                        outbox.push(strategy.message(view, round, &self.log));
                    }
                }
            }
        }
        self.log.extend(outbox);
        Ok(())
    }
}
