#include "dh/quality/lang_id.hpp"

#include <algorithm>
#include <sstream>

#include "dh/core/fsutil.hpp"
#include "dh/core/utf8.hpp"
#include "dh/quality/text_stats.hpp"

namespace dh::quality {

namespace {

constexpr std::size_t kProfileSize = 300;
constexpr std::size_t kMinTextChars = 20;

char32_t fold_cp(char32_t cp) {
    if (cp >= U'A' && cp <= U'Z') return cp + 32;
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;
    if (cp >= 0x410 && cp <= 0x42F) return cp + 32;
    if (cp >= 0x400 && cp <= 0x40F) return cp + 80;
    if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 32;
    return cp;
}

// Letters kept, everything else becomes a word-boundary marker.
std::vector<char32_t> normalized_chars(const std::string& text) {
    std::vector<char32_t> out;
    out.push_back(U'_');
    std::size_t pos = 0;
    bool last_boundary = true;
    while (pos < text.size()) {
        char32_t cp = fold_cp(utf8_next(text, pos));
        if (is_alpha(cp)) {
            out.push_back(cp);
            last_boundary = false;
        } else if (!last_boundary) {
            out.push_back(U'_');
            last_boundary = true;
        }
    }
    if (!last_boundary) out.push_back(U'_');
    return out;
}

std::map<std::string, std::size_t> gram_counts(const std::string& text) {
    std::map<std::string, std::size_t> counts;
    std::vector<char32_t> chars = normalized_chars(text);
    for (std::size_t n = 1; n <= 3; ++n) {
        if (chars.size() < n) continue;
        for (std::size_t i = 0; i + n <= chars.size(); ++i) {
            std::string gram;
            bool all_boundary = true;
            for (std::size_t k = 0; k < n; ++k) {
                utf8_append(gram, chars[i + k]);
                all_boundary = all_boundary && chars[i + k] == U'_';
            }
            if (all_boundary) continue;
            ++counts[gram];
        }
    }
    return counts;
}

std::vector<std::string> top_grams(const std::map<std::string, std::size_t>& counts) {
    std::vector<std::pair<std::string, std::size_t>> items(counts.begin(), counts.end());
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    std::vector<std::string> out;
    for (const auto& [gram, _] : items) {
        out.push_back(gram);
        if (out.size() >= kProfileSize) break;
    }
    return out;
}

// Seed prose for the built-in profiles (hand-written filler text).
const std::pair<const char*, const char*> kSeeds[] = {
    {"en",
     "The committee will meet on the first Tuesday of every month to review the progress of "
     "the project and to discuss any changes that may be required. Each member should bring a "
     "short written summary of the work completed during the previous period, together with a "
     "list of open questions for the group. The meeting room is on the second floor of the "
     "main building, next to the library. If you cannot attend, please send your notes to the "
     "secretary before the end of the week so that they can be included in the minutes. The "
     "annual report must describe the goals of the organization and the results achieved "
     "during the year, and it should be written in clear and simple language for the general "
     "public."},
    {"de",
     "Der Ausschuss trifft sich am ersten Dienstag jedes Monats, um den Fortschritt des "
     "Projekts zu besprechen und notwendige Änderungen zu prüfen. Jedes Mitglied soll eine "
     "kurze schriftliche Zusammenfassung der abgeschlossenen Arbeiten mitbringen sowie eine "
     "Liste offener Fragen für die Gruppe. Der Besprechungsraum befindet sich im zweiten "
     "Stock des Hauptgebäudes neben der Bibliothek. Wer nicht teilnehmen kann, sendet seine "
     "Notizen bitte vor Ende der Woche an die Geschäftsstelle, damit sie in das Protokoll "
     "aufgenommen werden können. Der Jahresbericht muss die Ziele der Organisation und die im "
     "Laufe des Jahres erreichten Ergebnisse in klarer und einfacher Sprache beschreiben."},
    {"fr",
     "Le comité se réunira le premier mardi de chaque mois pour examiner l'avancement du "
     "projet et discuter des modifications éventuelles. Chaque membre doit apporter un court "
     "résumé écrit des travaux réalisés pendant la période précédente, ainsi qu'une liste de "
     "questions ouvertes pour le groupe. La salle de réunion se trouve au deuxième étage du "
     "bâtiment principal, à côté de la bibliothèque. Si vous ne pouvez pas être présent, "
     "veuillez envoyer vos notes au secrétariat avant la fin de la semaine afin qu'elles "
     "soient intégrées au compte rendu. Le rapport annuel doit décrire les objectifs de "
     "l'organisation et les résultats obtenus au cours de l'année dans une langue claire et "
     "simple."},
    {"es",
     "El comité se reunirá el primer martes de cada mes para revisar el avance del proyecto y "
     "discutir los cambios que puedan ser necesarios. Cada miembro debe traer un breve "
     "resumen escrito del trabajo completado durante el periodo anterior, junto con una lista "
     "de preguntas abiertas para el grupo. La sala de reuniones está en el segundo piso del "
     "edificio principal, junto a la biblioteca. Si no puede asistir, envíe sus notas a la "
     "secretaría antes del final de la semana para que puedan incluirse en el acta. El "
     "informe anual debe describir los objetivos de la organización y los resultados "
     "obtenidos durante el año en un lenguaje claro y sencillo."},
    {"it",
     "Il comitato si riunirà il primo martedì di ogni mese per esaminare i progressi del "
     "progetto e discutere le modifiche eventualmente necessarie. Ogni membro deve portare un "
     "breve riassunto scritto del lavoro completato nel periodo precedente, insieme a un "
     "elenco di questioni aperte per il gruppo. La sala riunioni si trova al secondo piano "
     "dell'edificio principale, accanto alla biblioteca. Chi non può partecipare è pregato di "
     "inviare i propri appunti alla segreteria entro la fine della settimana, in modo che "
     "possano essere inseriti nel verbale. La relazione annuale deve descrivere gli obiettivi "
     "dell'organizzazione e i risultati raggiunti durante l'anno con un linguaggio chiaro e "
     "semplice."},
    {"pt",
     "O comitê vai se reunir na primeira terça-feira de cada mês para examinar o andamento do "
     "projeto e discutir as mudanças que possam ser necessárias. Cada membro deve trazer um "
     "breve resumo escrito do trabalho concluído no período anterior, junto com uma lista de "
     "questões em aberto para o grupo. A sala de reuniões fica no segundo andar do prédio "
     "principal, ao lado da biblioteca. Se não puder comparecer, envie suas anotações à "
     "secretaria antes do fim da semana para que possam ser incluídas na ata. O relatório "
     "anual deve descrever os objetivos da organização e os resultados alcançados durante o "
     "ano em linguagem clara e simples."},
    {"hu",
     "A bizottság minden hónap első keddjén ülésezik, hogy áttekintse a projekt "
     "előrehaladását és megvitassa a szükséges változtatásokat. Minden tag hozzon magával egy "
     "rövid írásos összefoglalót az előző időszakban elvégzett munkáról, valamint egy listát "
     "a csoport számára nyitott kérdésekről. A tárgyaló a főépület második emeletén található "
     "a könyvtár mellett. Aki nem tud részt venni, kérjük, küldje el jegyzeteit a "
     "titkárságnak a hét vége előtt, hogy bekerülhessenek a jegyzőkönyvbe. Az éves "
     "jelentésnek világos és egyszerű nyelven kell bemutatnia a szervezet céljait és az év "
     "során elért eredményeket."},
    {"nl",
     "De commissie komt elke eerste dinsdag van de maand bijeen om de voortgang van het "
     "project te bespreken en eventuele wijzigingen te beoordelen. Elk lid moet een korte "
     "schriftelijke samenvatting meenemen van het werk dat in de vorige periode is afgerond, "
     "samen met een lijst van openstaande vragen voor de groep. De vergaderruimte bevindt "
     "zich op de tweede verdieping van het hoofdgebouw, naast de bibliotheek. Wie niet "
     "aanwezig kan zijn, stuurt zijn aantekeningen vóór het einde van de week naar het "
     "secretariaat, zodat ze in het verslag kunnen worden opgenomen. Het jaarverslag moet de "
     "doelen van de organisatie en de behaalde resultaten in duidelijke en eenvoudige taal "
     "beschrijven."},
    {"ru",
     "Комитет собирается в первый вторник каждого месяца, чтобы рассмотреть ход проекта и "
     "обсудить необходимые изменения. Каждый участник должен принести краткое письменное "
     "изложение работы, выполненной за прошедший период, а также список открытых вопросов для "
     "группы. Зал заседаний находится на втором этаже главного здания рядом с библиотекой. "
     "Если вы не можете присутствовать, пожалуйста, отправьте свои заметки в секретариат до "
     "конца недели, чтобы их включили в протокол. Годовой отчет должен описывать цели "
     "организации и достигнутые за год результаты ясным и простым языком."},
};

}  // namespace

LanguageProfile train_profile(const std::string& code, const std::string& text) {
    LanguageProfile profile;
    profile.code = code;
    profile.grams = top_grams(gram_counts(text));
    return profile;
}

std::string profile_to_text(const LanguageProfile& profile) {
    std::string out = "#lang " + profile.code + "\n";
    for (const auto& gram : profile.grams) {
        out += gram;
        out += '\n';
    }
    return out;
}

LanguageProfile profile_from_text(const std::string& text) {
    LanguageProfile profile;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.rfind("#lang ", 0) == 0) {
            profile.code = line.substr(6);
            continue;
        }
        if (!line.empty()) profile.grams.push_back(line);
    }
    return profile;
}

LanguageClassifier LanguageClassifier::with_builtin_profiles() {
    LanguageClassifier c;
    for (const auto& [code, seed] : kSeeds) c.add(train_profile(code, seed));
    return c;
}

LanguageClassifier LanguageClassifier::from_directory(const std::filesystem::path& dir) {
    LanguageClassifier c;
    for (const auto& name : fs::list_files(dir)) {
        if (name.size() < 8 || name.substr(name.size() - 8) != ".profile") continue;
        c.add(profile_from_text(fs::read_text_file(dir / name)));
    }
    return c;
}

void LanguageClassifier::add(LanguageProfile profile) { profiles_.push_back(std::move(profile)); }

LanguageGuess LanguageClassifier::identify(const std::string& text) const {
    LanguageGuess guess;
    if (profiles_.empty()) return guess;
    if (utf8_length(text) < kMinTextChars) return guess;

    std::vector<std::string> sample = top_grams(gram_counts(text));
    if (sample.empty()) return guess;

    const double max_penalty = double(kProfileSize);
    double best = -1, second = -1;
    const LanguageProfile* best_profile = nullptr;
    for (const auto& profile : profiles_) {
        std::map<std::string, std::size_t> rank;
        for (std::size_t i = 0; i < profile.grams.size(); ++i) rank[profile.grams[i]] = i;
        double distance = 0;
        for (std::size_t i = 0; i < sample.size(); ++i) {
            auto it = rank.find(sample[i]);
            distance += it == rank.end()
                            ? max_penalty
                            : double(i > it->second ? i - it->second : it->second - i);
        }
        if (best < 0 || distance < best) {
            second = best;
            best = distance;
            best_profile = &profile;
        } else if (second < 0 || distance < second) {
            second = distance;
        }
    }
    guess.code = best_profile->code;
    if (second <= 0) {
        guess.confidence = 1.0;
    } else {
        // Normalized margin between the two closest profiles.
        guess.confidence = std::min(1.0, 2.0 * (second - best) / second);
    }
    return guess;
}

}  // namespace dh::quality
