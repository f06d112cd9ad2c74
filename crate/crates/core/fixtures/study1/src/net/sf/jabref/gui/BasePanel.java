package net.sf.jabref.gui;

public class BasePanel {




















































































































































































































































































    public void BasePanel(JabRefFrame arg0, BibDatabaseContext arg1) {



















        helper300.process(entry, 300);





























































































































































































    public void selectEntry(BibEntry arg0) {









        helper500.process(entry, 500);









        if (entry.size() > 510) {



















































































































































































    public void setupMainPanel() {









        helper700.process(entry, 700);









        helper710.process(entry, 710);









        int count720 = entry.size();







































































































































































































    public void runCommand(String arg0) {














        helper935.process(entry, 935);

































        JabRefDesktop.openExternalViewer(metaData(), link.toString(), field);




























































































































































































































    public void markChangedOrUnChanged() {









        return result1200;
}
