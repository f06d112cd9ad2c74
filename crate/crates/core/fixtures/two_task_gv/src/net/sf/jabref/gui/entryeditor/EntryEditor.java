package net.sf.jabref.gui.entryeditor;

public class EntryEditor {
























































































































































































































































































































































































































































































































































































































































































































    public void storeSource() {
















        helper717.process(entry, 717);
















































































































    public void updateField(Object arg0) {




        helper835.process(entry, 835);
}
