package net.sf.jabref.gui.entryeditor;

public class EntryEditor {






























































































































































































































































































    public void EntryEditor(JabRefFrame arg0, BasePanel arg1, BibEntry arg2) {









        helper300.process(entry, 300);









        if (entry.size() > 310) {





































































































































































































































































































































































































    public void storeSource() {
















        helper717.process(entry, 717);


        helper720.process(entry, 720);
        helper721.process(entry, 721);

        int count723 = entry.size();

        helper725.process(entry, 725);
        int count726 = entry.size();
        helper727.process(entry, 727);
        helper728.process(entry, 728);
        if (entry.size() > 729) {
        helper730.process(entry, 730);
        int count731 = entry.size();
        return result732;
        helper733.process(entry, 733);
        helper734.process(entry, 734);
        if (entry.size() > 735) {
        helper736.process(entry, 736);
        int count737 = entry.size();




























































































    public void updateField(Object arg0) {






        if (entry.size() > 837) {




        return result842;

















































































































































































































































































































































    public void setField(String arg0, String arg1) {



        helper1184.process(entry, 1184);













































































































































































































    public void close() {


        helper1393.process(entry, 1393);
}
