//! The extension points a simulation can customize, and the built-in
//! presets selectable by name.
//!
//! A behavior supplies thirteen hooks: two at organism level (fitness and
//! mutation), five at population level (selection before and after mating,
//! mating itself, whole-population events, and the generation report), and
//! six at world level (per-cell movement, relocation, ecology and local
//! updates, whole-world regulation, and the world report). Every hook has a
//! no-op default, so a preset implements only what its experiment needs.

use rand::RngCore;

use crate::genetics::{MutationStyle, Organism, Population};
use crate::world::World;

/// The hook bundle driving one simulation.
///
/// Hooks that act randomly must draw only from the generator they are
/// handed; it is derived per call site, which is what makes a run
/// reproducible regardless of evaluation order.
#[allow(unused_variables)]
pub trait Behavior {
    /// Scores an organism. Reserved for selection experiments; the default
    /// driver never calls it.
    fn fitness(&self, organism: &Organism) -> Option<f64> {
        None
    }

    /// Mutates one organism in place.
    fn mutation_scheme(
        &self,
        organism: &mut Organism,
        rng: &mut dyn RngCore,
    ) -> Result<(), String> {
        Ok(())
    }

    /// Selection or culling before mating.
    fn prepopulation_control(
        &self,
        population: &mut Population,
        rng: &mut dyn RngCore,
    ) -> Result<(), String> {
        Ok(())
    }

    /// Mate choice and recombination.
    fn mating(&self, population: &mut Population, rng: &mut dyn RngCore) -> Result<(), String> {
        Ok(())
    }

    /// Selection or culling after mating.
    fn postpopulation_control(
        &self,
        population: &mut Population,
        rng: &mut dyn RngCore,
    ) -> Result<(), String> {
        Ok(())
    }

    /// Whole-population events after every organism has mutated.
    fn generation_events(
        &self,
        population: &mut Population,
        rng: &mut dyn RngCore,
    ) -> Result<(), String> {
        Ok(())
    }

    /// One line summarizing the population, recorded on the print schedule.
    fn report(&self, population: &Population) -> Result<String, String> {
        Ok(String::new())
    }

    /// Moves organisms out of one cell.
    fn organism_movement(
        &self,
        world: &mut World,
        coordinate: [usize; 3],
        rng: &mut dyn RngCore,
    ) -> Result<(), String> {
        Ok(())
    }

    /// Settles organisms into one cell.
    fn organism_location(
        &self,
        world: &mut World,
        coordinate: [usize; 3],
        rng: &mut dyn RngCore,
    ) -> Result<(), String> {
        Ok(())
    }

    /// Whole-world regulation at the top of each generation.
    fn ecoregulate(&self, world: &mut World, rng: &mut dyn RngCore) -> Result<(), String> {
        Ok(())
    }

    /// Per-cell ecology update.
    fn update_ecology(
        &self,
        world: &mut World,
        coordinate: [usize; 3],
        rng: &mut dyn RngCore,
    ) -> Result<(), String> {
        Ok(())
    }

    /// Per-cell local-condition update.
    fn update_local(
        &self,
        world: &mut World,
        coordinate: [usize; 3],
        rng: &mut dyn RngCore,
    ) -> Result<(), String> {
        Ok(())
    }

    /// World-level summary at the end of each generation.
    fn report_world(&self, world: &World) -> Result<(), String> {
        Ok(())
    }
}

/// Every hook left at its default; a run only ticks the generation counter
/// and executes genomes.
pub struct NoopBehavior;

impl Behavior for NoopBehavior {}

/// Runs one point-mutation pass over each organism's first chromosome per
/// generation and reports the TAB-joined genome strings — the setup behind
/// the sequence-divergence experiment.
pub struct DivergenceBehavior;

fn mutate_first_chromosome(organism: &mut Organism, rng: &mut dyn RngCore) {
    if let Some(chromosome) = organism.genome.first_mut() {
        chromosome.rmutate(MutationStyle::Point, 0.0, rng);
    }
}

fn first_chromosome_text(organism: &Organism) -> String {
    organism
        .genome
        .first()
        .map(|c| c.sequence.iter().collect())
        .unwrap_or_default()
}

impl Behavior for DivergenceBehavior {
    fn mutation_scheme(
        &self,
        organism: &mut Organism,
        rng: &mut dyn RngCore,
    ) -> Result<(), String> {
        mutate_first_chromosome(organism, rng);
        Ok(())
    }

    fn report(&self, population: &Population) -> Result<String, String> {
        Ok(population
            .agents
            .iter()
            .map(first_chromosome_text)
            .collect::<Vec<_>>()
            .join("\t"))
    }
}

/// Same mutation pass as [`DivergenceBehavior`], but the report is each
/// organism's cytoplasm as comma-joined values — the setup behind the
/// cytoplasmic-convergence experiment.
pub struct CytoplasmBehavior;

impl Behavior for CytoplasmBehavior {
    fn mutation_scheme(
        &self,
        organism: &mut Organism,
        rng: &mut dyn RngCore,
    ) -> Result<(), String> {
        mutate_first_chromosome(organism, rng);
        Ok(())
    }

    fn report(&self, population: &Population) -> Result<String, String> {
        Ok(population
            .agents
            .iter()
            .map(Organism::get_cytoplasm)
            .collect::<Vec<_>>()
            .join("\t"))
    }
}

/// Looks up a built-in behavior by name.
pub fn preset(name: &str) -> Option<Box<dyn Behavior + Send + Sync>> {
    match name {
        "noop" => Some(Box::new(NoopBehavior)),
        "divergence" => Some(Box::new(DivergenceBehavior)),
        "cytoplasm" => Some(Box::new(CytoplasmBehavior)),
        _ => None,
    }
}

/// Names accepted by [`preset`], for help text and error messages.
pub fn preset_names() -> &'static [&'static str] {
    &["noop", "divergence", "cytoplasm"]
}
